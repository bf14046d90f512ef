//! Independent routes compared on seeded random surfaces.

use delpezzo::lines::{
    find_lines, lines_over, lines_over_brute_force, minimal_by_short_orbits, on_some_line,
};
use delpezzo::picard::{frobenius_element, schlafli_label, weil_prediction};
use delpezzo::projgeom::enum_points;
use delpezzo::scan::{samples, ScanConfig, ScanKind};
use delpezzo::surface_file::Surface;
use delpezzo::Error;
use proptest::prelude::*;

fn sample(kind: ScanKind, p: u32, r: u32, seed: u64) -> Surface {
    let cfg = ScanConfig {
        kind,
        p,
        r,
        count: 1,
        seed,
        cap: 8192,
    };
    samples(&cfg).unwrap()[0].into_surface().unwrap()
}

fn cubic(p: u32, r: u32, seed: u64) -> delpezzo::cubic::CubicSurface {
    match sample(ScanKind::Cubic, p, r, seed) {
        Surface::Cubic(s) => s,
        Surface::Dp4(_) => unreachable!(),
    }
}

fn field() -> impl Strategy<Value = (u32, u32)> {
    prop_oneof![Just((2, 1)), Just((3, 1)), Just((2, 2))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn point_scan_matches_direct_evaluation((p, r) in field(), seed in any::<u64>()) {
        let s = cubic(p, r, seed);
        for k in 1..=2 {
            let g = s.geometry(k).unwrap();
            let f = g.field();
            let mut direct: Vec<_> = enum_points::<4>(f).unwrap().into_iter().filter(|x| g.eval(x.coords()).is_zero()).collect();
            direct.sort_by_key(|x| x.lex_key(f));
            prop_assert_eq!(g.points().unwrap(), direct);
        }
    }

    #[test]
    fn tangent_pencil_matches_all_lines((p, r) in field(), seed in any::<u64>()) {
        let s = cubic(p, r, seed);
        prop_assume!(s.check_smooth().is_ok());
        for k in (1..).take_while(|&k| s.q().pow(k) <= 16) {
            let g = s.geometry(k).unwrap();
            let f = g.field();
            let mut fast = lines_over(&g).unwrap();
            let mut slow = lines_over_brute_force(&g);
            fast.sort_by_key(|l| l.lex_key(f));
            slow.sort_by_key(|l| l.lex_key(f));
            prop_assert_eq!(fast, slow);
        }
    }

    #[test]
    fn smooth_cubics_satisfy_the_lattice_identities((p, r) in field(), seed in any::<u64>()) {
        let s = cubic(p, r, seed);
        prop_assume!(s.check_smooth().is_ok());
        let cfg = match find_lines(&s) {
            Ok(c) => c,
            Err(e) if e.is_out_of_range() => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert!(cfg.row_sums().iter().all(|&d| d == 10));
        let lab = schlafli_label(&cfg.incidence).unwrap();
        let fr = frobenius_element(&cfg.frobenius, &lab).unwrap();
        for k in 1..=2 {
            let n = s.geometry(k).unwrap().point_count().unwrap() as i128;
            prop_assert_eq!(weil_prediction(s.q(), k, &fr), n);
            prop_assert_eq!(n as u64 % s.p() as u64, 1);
        }
        if let Some(short) = minimal_by_short_orbits(&s).unwrap() {
            prop_assert_eq!(short, cfg.is_minimal());
        }
        if cfg.is_minimal() {
            prop_assert!(!cfg.has_rational_line());
            prop_assert!(fr.trace().abs() <= 2);
        }
    }

    #[test]
    fn tangent_test_matches_the_line_locus((p, r) in field(), seed in any::<u64>()) {
        let s = cubic(p, r, seed);
        prop_assume!(s.check_smooth().is_ok());
        let cfg = match find_lines(&s) {
            Ok(c) => c,
            Err(e) if e.is_out_of_range() => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let (on, off) = match delpezzo::lines::points_on_exceptional_locus(&s, &cfg, 1) {
            Ok(x) => x,
            Err(Error::FieldCap { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let g = s.geometry(1).unwrap();
        for x in &on {
            prop_assert!(on_some_line(&g, x).unwrap());
        }
        for x in &off {
            prop_assert!(!on_some_line(&g, x).unwrap());
        }
    }

    #[test]
    fn dp4_chart_points_match_the_full_scan(p in prop_oneof![Just(2u32), Just(3)], seed in any::<u64>()) {
        let s = match sample(ScanKind::Dp4, p, 1, seed) {
            Surface::Dp4(s) => s,
            Surface::Cubic(_) => unreachable!(),
        };
        for k in 1..=2 {
            let g = s.geometry(k).unwrap();
            prop_assert_eq!(g.points().unwrap(), g.points_brute_force().unwrap());
            let f = g.field();
            let mut section: Vec<_> = g.points().unwrap().into_iter().filter(|x| x.coords()[4].is_zero()).collect();
            section.sort_by_key(|x| x.lex_key(f));
            prop_assert_eq!(g.section_points(), section);
        }
    }
}
