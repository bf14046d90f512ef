//! Full-pipeline analysis of one surface, as a serializable report.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::time::Instant;

use serde::Serialize;

use crate::cubic::CubicSurface;
use crate::dp4::{classify_points, find_dp4_lines, Dp4Bundle, Dp4Case, Dp4Surface};
use crate::error::Error;
use crate::ffield::FieldCtx;
use crate::lines::{find_lines, points_on_exceptional_locus, LineConfiguration};
use crate::param::{
    closure_census, fiber_analysis, find_kollar_line, working_degree, ClosureCensus, FiberReport,
    MapValue,
};
use crate::picard::{frobenius_element, schlafli_label, surface_h1, weil_prediction, weyl_group};
use crate::projgeom::Point3;
use crate::surface_file::Surface;

pub const SCHEMA_VERSION: u32 = 1;

/// Upper bound on `phi_bar` evaluations in the fiber histogram.
pub const PAIR_BUDGET: u64 = 1 << 20;
/// Upper bound on `q^{2d}` for the closure census over `S(F_{q^d})`.
pub const CENSUS_BUDGET: u64 = 1 << 16;
/// Upper bound on `q^{3k}` for dP4 point counts.
pub const DP4_COUNT_BUDGET: u64 = 1 << 25;

#[derive(Clone, Copy, Debug, Default)]
pub struct AnalyzeOptions {
    pub skip_param: bool,
    /// Only field, smoothness, lines and the parameterization.
    pub param_only: bool,
    pub timing: bool,
}

/// A pipeline error tagged with the stage that raised it.
#[derive(Debug)]
pub struct Failure {
    pub stage: &'static str,
    pub error: Error,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} failed: {}", self.stage, self.error)
    }
}

impl std::error::Error for Failure {}

fn at<T>(stage: &'static str, r: crate::Result<T>) -> Result<T, Failure> {
    r.map_err(|error| Failure { stage, error })
}

#[derive(Clone, Debug, Serialize)]
pub struct FieldInfo {
    pub p: u32,
    pub r: u32,
    pub q: u64,
    pub gen_poly: Vec<u32>,
    pub extension_cap: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Smoothness {
    pub smooth: bool,
    /// Extension degrees over `F_q` scanned for singular points.
    pub degrees: Vec<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointCount {
    pub k: u32,
    /// `None` when `F_{q^k}` is beyond the cap.
    pub count: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LineRow {
    pub index: usize,
    pub line: String,
    pub min_degree: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct EckardtRow {
    pub point: String,
    pub lines: Vec<usize>,
    pub rational: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LineSection {
    /// Extension of `F_q` the line coordinates live in; `a` is its generator.
    pub analysis_degree: u32,
    pub analysis_modulus: Vec<u32>,
    pub lines: Vec<LineRow>,
    pub splitting_degree: u32,
    pub incidence_row_sums: Vec<usize>,
    pub frobenius_cycle_type: Vec<usize>,
    pub eckardt_count: usize,
    pub eckardt: Vec<EckardtRow>,
    pub minimal: bool,
    pub minimality_witness: Option<Vec<usize>>,
    pub rational_line: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointSection {
    pub counts: Vec<PointCount>,
    pub rational_points: Vec<String>,
    pub rational_on_lines: usize,
    pub rational_off_lines: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeilRow {
    pub k: u32,
    pub predicted: i128,
    pub counted: Option<u64>,
    pub holds: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct H1Row {
    pub m: u32,
    pub invariant_factors: Vec<u64>,
    pub order: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FrobeniusClass {
    pub index: usize,
    pub order: usize,
    pub trace: i64,
    pub cycle_type: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PicardSection {
    pub trace: i64,
    pub frobenius_class: FrobeniusClass,
    pub weil: Vec<WeilRow>,
    pub h1: Vec<H1Row>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ParamSection {
    pub status: String,
    pub m: Option<u32>,
    pub working_degree: Option<u32>,
    pub base_point: Option<String>,
    pub line: Option<String>,
    pub s: Option<String>,
    pub s_conj: Option<String>,
    pub indeterminacy_on_script_l: Option<usize>,
    pub indeterminacy_over_closure: Option<usize>,
    /// Every determinate value of `phi` on `P^1(F_{q^2})` lies in `S(F_q)`.
    pub phi_values_rational: Option<bool>,
    pub fibers: Option<FiberReport>,
    pub closure: Option<ClosureCensus>,
}

impl ParamSection {
    fn status(status: impl Into<String>) -> ParamSection {
        ParamSection {
            status: status.into(),
            m: None,
            working_degree: None,
            base_point: None,
            line: None,
            s: None,
            s_conj: None,
            indeterminacy_on_script_l: None,
            indeterminacy_over_closure: None,
            phi_values_rational: None,
            fibers: None,
            closure: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CubicReport {
    pub schema_version: u32,
    pub kind: &'static str,
    pub field: FieldInfo,
    pub smoothness: Smoothness,
    pub lines: LineSection,
    pub points: Option<PointSection>,
    pub picard: Option<PicardSection>,
    pub param: Option<ParamSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<BTreeMap<&'static str, u64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Dp4PointRow {
    pub point: String,
    pub lines: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Dp4Report {
    pub schema_version: u32,
    pub kind: &'static str,
    pub field: FieldInfo,
    pub smoothness: Smoothness,
    pub point_counts: Vec<PointCount>,
    pub analysis_degree: u32,
    pub analysis_modulus: Vec<u32>,
    pub lines: Vec<LineRow>,
    pub splitting_degree: u32,
    pub incidence_row_sums: Vec<usize>,
    pub frobenius_cycle_type: Vec<usize>,
    pub rational_points: Vec<Dp4PointRow>,
    pub max_lines_per_point: usize,
    pub case: Dp4Case,
    pub bundles: Option<[Dp4Bundle; 2]>,
    pub obstructed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<BTreeMap<&'static str, u64>>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum AnalysisReport {
    Cubic(Box<CubicReport>),
    Dp4(Box<Dp4Report>),
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

struct Clock {
    on: bool,
    start: Instant,
    laps: BTreeMap<&'static str, u64>,
}

impl Clock {
    fn new(on: bool) -> Clock {
        Clock {
            on,
            start: Instant::now(),
            laps: BTreeMap::new(),
        }
    }

    fn lap(&mut self, stage: &'static str) {
        if self.on {
            self.laps
                .insert(stage, self.start.elapsed().as_millis() as u64);
            self.start = Instant::now();
        }
    }

    fn finish(self) -> Option<BTreeMap<&'static str, u64>> {
        self.on.then_some(self.laps)
    }
}

fn field_info(p: u32, r: u32, q: u64, gen_poly: &[u32], cap: u64) -> FieldInfo {
    FieldInfo {
        p,
        r,
        q,
        gen_poly: gen_poly.to_vec(),
        extension_cap: cap,
    }
}

pub fn analyze(surface: &Surface, opts: AnalyzeOptions) -> Result<AnalysisReport, Failure> {
    match surface {
        Surface::Cubic(s) => analyze_cubic(s, opts).map(|r| AnalysisReport::Cubic(Box::new(r))),
        Surface::Dp4(s) => analyze_dp4(s, opts).map(|r| AnalysisReport::Dp4(Box::new(r))),
    }
}

fn line_section(cfg: &LineConfiguration) -> LineSection {
    let g = cfg.geometry();
    let f = g.field();
    let rational = |x: &Point3| x.coords().iter().all(|&c| g.in_base_power(c, 1));
    LineSection {
        analysis_degree: g.k(),
        analysis_modulus: f.modulus().to_vec(),
        lines: cfg
            .lines
            .iter()
            .enumerate()
            .map(|(index, l)| LineRow {
                index,
                line: l.line.display(f),
                min_degree: l.min_degree,
            })
            .collect(),
        splitting_degree: cfg.splitting_degree,
        incidence_row_sums: cfg.row_sums(),
        frobenius_cycle_type: cfg.cycle_type(),
        eckardt_count: cfg.eckardt.len(),
        eckardt: cfg
            .eckardt
            .iter()
            .map(|e| EckardtRow {
                point: e.point.display(f),
                lines: e.lines.clone(),
                rational: rational(&e.point),
            })
            .collect(),
        minimal: cfg.is_minimal(),
        minimality_witness: cfg.minimality_witness(),
        rational_line: cfg.has_rational_line(),
    }
}

pub fn analyze_cubic(s: &CubicSurface, opts: AnalyzeOptions) -> Result<CubicReport, Failure> {
    let mut clock = Clock::new(opts.timing);
    let degrees = at("smoothness", s.check_smooth())?;
    clock.lap("smoothness");
    let cfg = at("lines", find_lines(s))?;
    let lines = line_section(&cfg);
    clock.lap("lines");

    let (points, picard) = if opts.param_only {
        (None, None)
    } else {
        let counts: Vec<PointCount> = (1..=3)
            .map(|k| -> crate::Result<PointCount> {
                let count = if s.fits(k) {
                    Some(s.geometry(k)?.point_count()?)
                } else {
                    None
                };
                Ok(PointCount { k, count })
            })
            .collect::<crate::Result<_>>()
            .map_err(|error| Failure {
                stage: "points",
                error,
            })?;
        let g1 = at("points", s.geometry(1))?;
        let (on, off) = at("points", points_on_exceptional_locus(s, &cfg, 1))?;
        let mut rational: Vec<Point3> = on.iter().chain(&off).copied().collect();
        rational.sort_by_key(|p| p.lex_key(g1.field()));
        let points = PointSection {
            counts: counts.clone(),
            rational_points: rational.iter().map(|p| p.display(g1.field())).collect(),
            rational_on_lines: on.len(),
            rational_off_lines: off.len(),
        };
        clock.lap("points");

        let lab = at("picard", schlafli_label(&cfg.incidence))?;
        let fr = at("picard", frobenius_element(&cfg.frobenius, &lab))?;
        let class = weyl_group()
            .class_of(&fr)
            .expect("frobenius_element checks membership");
        let weil = counts
            .iter()
            .map(|c| {
                let predicted = weil_prediction(s.q(), c.k, &fr);
                WeilRow {
                    k: c.k,
                    predicted,
                    counted: c.count,
                    holds: c.count.map(|n| n as i128 == predicted),
                }
            })
            .collect();
        let h1 = (1..=3)
            .map(|m| {
                let h = surface_h1(&fr, m);
                H1Row {
                    m,
                    order: h.order,
                    invariant_factors: h.invariant_factors,
                }
            })
            .collect();
        let picard = PicardSection {
            trace: fr.trace(),
            frobenius_class: FrobeniusClass {
                index: class.index,
                order: class.order,
                trace: class.trace,
                cycle_type: class.cycle_type.clone(),
            },
            weil,
            h1,
        };
        clock.lap("picard");
        (Some(points), Some(picard))
    };

    let param = if opts.skip_param {
        None
    } else {
        let p = param_section(s, &cfg)?;
        clock.lap("param");
        Some(p)
    };

    Ok(CubicReport {
        schema_version: SCHEMA_VERSION,
        kind: "cubic",
        field: field_info(s.p(), s.r(), s.q(), s.gen_poly(), s.cap()),
        smoothness: Smoothness {
            smooth: true,
            degrees,
        },
        lines,
        points,
        picard,
        param,
        timing_ms: clock.finish(),
    })
}

/// Largest `m <= 3` whose working field fits the cap and whose pair count fits
/// the budget.
pub fn param_degree(s: &CubicSurface, cfg: &LineConfiguration) -> Option<u32> {
    (1..=3).rev().find(|&m| {
        let side = s.q().saturating_pow(2 * m).saturating_add(1);
        s.fits(working_degree(cfg, m)) && side.saturating_mul(side) <= PAIR_BUDGET
    })
}

fn param_section(s: &CubicSurface, cfg: &LineConfiguration) -> Result<ParamSection, Failure> {
    let Some(m) = param_degree(s, cfg) else {
        return Ok(ParamSection::status(
            "out of range: no working field within the cap",
        ));
    };
    let w = working_degree(cfg, m);
    let g1 = at("param", s.geometry(1))?;
    let mut found = None;
    for x in at("param", s.surface_points(1))? {
        match find_kollar_line(s, cfg, &x, m) {
            Ok(d) => {
                found = Some(d);
                break;
            }
            Err(Error::NoAdmissibleLine) => continue,
            Err(error) => {
                return Err(Failure {
                    stage: "param",
                    error,
                })
            }
        }
    }
    let Some(data) = found else {
        let mut sec = ParamSection::status("no admissible line through any rational point");
        sec.m = Some(m);
        sec.working_degree = Some(w);
        return Ok(sec);
    };
    let g = data.geometry();
    let f: &FieldCtx = g.field();
    let phi = at("param", data.phi_values())?;
    let phi_values_rational = phi.iter().all(|v| {
        matches!(v, MapValue::Indeterminate)
            || matches!(v, MapValue::Point(p) if p.in_subfield(f, s.r()))
    });
    let fibers = at("param", fiber_analysis(&data, m))?;
    let census_degree = (1..=w)
        .rev()
        .find(|&d| w.is_multiple_of(d) && s.q().saturating_pow(2 * d) <= CENSUS_BUDGET);
    let closure = match census_degree {
        Some(d) => Some(at("param", closure_census(&data, d))?),
        None => None,
    };
    Ok(ParamSection {
        status: "admissible line found".into(),
        m: Some(m),
        working_degree: Some(w),
        base_point: Some(data.base_point.display(g1.field())),
        line: Some(data.line.display(f)),
        s: Some(data.s.display(f)),
        s_conj: Some(data.s_conj.display(f)),
        indeterminacy_on_script_l: Some(data.indeterminacy.len()),
        indeterminacy_over_closure: Some(data.indeterminacy_closure),
        phi_values_rational: Some(phi_values_rational),
        fibers: Some(fibers),
        closure,
    })
}

pub fn analyze_dp4(s: &Dp4Surface, opts: AnalyzeOptions) -> Result<Dp4Report, Failure> {
    let mut clock = Clock::new(opts.timing);
    let degrees = at("smoothness", s.check_smooth())?;
    clock.lap("smoothness");
    let point_counts = (1..=3)
        .map(|k| -> crate::Result<PointCount> {
            let fits = s.fits(k) && s.q().saturating_pow(3 * k) <= DP4_COUNT_BUDGET;
            let count = if fits {
                Some(s.points(k)?.len() as u64)
            } else {
                None
            };
            Ok(PointCount { k, count })
        })
        .collect::<crate::Result<_>>()
        .map_err(|error| Failure {
            stage: "points",
            error,
        })?;
    clock.lap("points");
    let cfg = at("lines", find_dp4_lines(s))?;
    let g = cfg.geometry();
    let f = g.field();
    clock.lap("lines");
    let cls = at("classification", classify_points(s, &cfg))?;
    let g1 = at("classification", s.geometry(1))?;
    clock.lap("classification");
    Ok(Dp4Report {
        schema_version: SCHEMA_VERSION,
        kind: "dp4",
        field: field_info(s.p(), s.r(), s.q(), s.gen_poly(), s.cap()),
        smoothness: Smoothness {
            smooth: true,
            degrees,
        },
        point_counts,
        analysis_degree: g.k(),
        analysis_modulus: f.modulus().to_vec(),
        lines: cfg
            .lines
            .iter()
            .enumerate()
            .map(|(index, (l, d))| LineRow {
                index,
                line: l.display(f),
                min_degree: *d,
            })
            .collect(),
        splitting_degree: cfg.splitting_degree,
        incidence_row_sums: cfg.row_sums(),
        frobenius_cycle_type: cfg.cycle_type(),
        rational_points: cls
            .points
            .iter()
            .map(|(x, l)| Dp4PointRow {
                point: x.display(g1.field()),
                lines: l.clone(),
            })
            .collect(),
        max_lines_per_point: cls.max_lines_per_point(),
        case: cls.case,
        obstructed: cls.is_obstructed(),
        bundles: cls.bundles,
        timing_ms: clock.finish(),
    })
}

fn field_line(out: &mut String, fi: &FieldInfo) {
    let _ = write!(out, "field: F_{} (p = {}, r = {}", fi.q, fi.p, fi.r);
    if fi.r > 1 {
        let _ = write!(out, ", gen_poly = {:?}", fi.gen_poly);
    }
    let _ = writeln!(out, "), extension cap {}", fi.extension_cap);
}

fn degree_histogram(rows: &[LineRow]) -> String {
    let mut h: BTreeMap<u32, usize> = BTreeMap::new();
    for r in rows {
        *h.entry(r.min_degree).or_insert(0) += 1;
    }
    h.iter()
        .map(|(d, n)| format!("{n} of degree {d}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn counts_line(counts: &[PointCount]) -> String {
    counts
        .iter()
        .map(|c| match c.count {
            Some(n) => format!("k={}: {n}", c.k),
            None => format!("k={}: beyond cap", c.k),
        })
        .collect::<Vec<_>>()
        .join(", ")
}

impl CubicReport {
    pub fn to_text(&self) -> String {
        let mut o = String::new();
        let _ = writeln!(o, "cubic surface");
        field_line(&mut o, &self.field);
        let _ = writeln!(o, "smooth: yes (scanned k = {:?})", self.smoothness.degrees);
        let l = &self.lines;
        let _ = writeln!(
            o,
            "lines: {} ({}), splitting degree {}",
            l.lines.len(),
            degree_histogram(&l.lines),
            l.splitting_degree
        );
        let _ = writeln!(
            o,
            "frobenius cycle type on lines: {:?}",
            l.frobenius_cycle_type
        );
        let rational_eck = l.eckardt.iter().filter(|e| e.rational).count();
        let _ = writeln!(
            o,
            "eckardt points: {} over F_q^{} ({} rational)",
            l.eckardt_count, l.analysis_degree, rational_eck
        );
        match &l.minimality_witness {
            None => {
                let _ = writeln!(o, "minimal: yes");
            }
            Some(w) => {
                let _ = writeln!(o, "minimal: no, stable skew set {w:?}");
            }
        }
        let _ = writeln!(
            o,
            "rational line: {}",
            if l.rational_line { "yes" } else { "no" }
        );
        if let Some(p) = &self.points {
            let _ = writeln!(o, "points: {}", counts_line(&p.counts));
            let _ = writeln!(
                o,
                "rational points: {} ({} on lines, {} off)",
                p.rational_points.join(" "),
                p.rational_on_lines,
                p.rational_off_lines
            );
        }
        if let Some(p) = &self.picard {
            let c = &p.frobenius_class;
            let _ = writeln!(
                o,
                "Tr F* = {}, class {} (order {}, cycle type {:?})",
                p.trace, c.index, c.order, c.cycle_type
            );
            for w in &p.weil {
                let verdict = match w.holds {
                    Some(true) => "ok",
                    Some(false) => "MISMATCH",
                    None => "not counted",
                };
                let _ = writeln!(o, "weil k={}: predicted {}, {verdict}", w.k, w.predicted);
            }
            let h1: Vec<String> =
                p.h1.iter()
                    .map(|h| format!("m={}: order {}", h.m, h.order))
                    .collect();
            let _ = writeln!(o, "H^1: {}", h1.join(", "));
        }
        if let Some(p) = &self.param {
            let _ = writeln!(o, "parameterization: {}", p.status);
            if let (Some(x), Some(line)) = (&p.base_point, &p.line) {
                let _ = writeln!(o, "  x = {x}, line {line}");
            }
            if let Some(n) = p.indeterminacy_on_script_l {
                let _ = writeln!(o, "  indeterminacy on the tangent-plane line: {n} points");
            }
            if let Some(r) = p.phi_values_rational {
                let _ = writeln!(
                    o,
                    "  phi values in S(F_q): {}",
                    if r { "all" } else { "NOT all" }
                );
            }
            if let Some(fr) = &p.fibers {
                let _ = writeln!(
                    o,
                    "  fibers over F_{}: modal {}, max {}, {} indeterminate of {} pairs, histogram {:?}",
                    fr.field_size, fr.modal, fr.max_fiber, fr.indeterminate, fr.pairs, fr.histogram
                );
            }
            if let Some(c) = &p.closure {
                let _ = writeln!(
                    o,
                    "  closure fibers over S(F_q^{}): modal {}, tangent {}, contracted {}, histogram {:?}",
                    c.degree, c.modal, c.tangent, c.curves, c.histogram
                );
            }
        }
        if let Some(t) = &self.timing_ms {
            let _ = writeln!(o, "timing (ms): {t:?}");
        }
        o
    }
}

impl Dp4Report {
    pub fn to_text(&self) -> String {
        let mut o = String::new();
        let _ = writeln!(o, "degree four del Pezzo surface");
        field_line(&mut o, &self.field);
        let _ = writeln!(o, "smooth: yes (scanned k = {:?})", self.smoothness.degrees);
        let _ = writeln!(o, "points: {}", counts_line(&self.point_counts));
        let _ = writeln!(
            o,
            "lines: {} ({}), splitting degree {}",
            self.lines.len(),
            degree_histogram(&self.lines),
            self.splitting_degree
        );
        let _ = writeln!(
            o,
            "frobenius cycle type on lines: {:?}",
            self.frobenius_cycle_type
        );
        let _ = writeln!(
            o,
            "max lines through a rational point: {}",
            self.max_lines_per_point
        );
        let _ = writeln!(o, "case: {:?}", self.case);
        if let Some(b) = &self.bundles {
            for x in b {
                let _ = writeln!(
                    o,
                    "  bundle with axis {:?}: {} singular fibers, {} rational, smooth rational fiber: {}",
                    x.axis,
                    x.singular_fibers.len(),
                    x.rational_singular,
                    x.smooth_rational_fiber
                );
            }
        }
        if let Some(t) = &self.timing_ms {
            let _ = writeln!(o, "timing (ms): {t:?}");
        }
        o
    }
}

impl AnalysisReport {
    pub fn to_text(&self) -> String {
        match self {
            AnalysisReport::Cubic(r) => r.to_text(),
            AnalysisReport::Dp4(r) => r.to_text(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn rational_f2_report_without_param() {
        let r = analyze_cubic(
            &fixtures::rational_f2(),
            AnalyzeOptions {
                skip_param: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(r.lines.lines.len(), 27);
        assert!(!r.lines.minimal);
        assert_eq!(r.picard.as_ref().unwrap().trace, -1);
        assert!(r
            .picard
            .as_ref()
            .unwrap()
            .weil
            .iter()
            .all(|w| w.holds == Some(true)));
        assert!(r.param.is_none());
        let json = AnalysisReport::Cubic(Box::new(r)).to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["schema_version"], SCHEMA_VERSION);
        assert!(v.get("timing_ms").is_none());
    }

    #[test]
    fn dp4_report_records_the_case() {
        let r = analyze_dp4(&fixtures::dp4("dp4-f3").unwrap(), AnalyzeOptions::default()).unwrap();
        assert_eq!(r.lines.len(), 16);
        assert_eq!(r.case, Dp4Case::II);
        assert_eq!(r.point_counts[0].count, Some(16));
    }

    #[test]
    fn singular_surface_fails_in_smoothness() {
        let s = CubicSurface::new(2, 1, &[], vec![(vec![3, 0, 0, 0], vec![1])]).unwrap();
        let e = analyze_cubic(&s, AnalyzeOptions::default()).unwrap_err();
        assert_eq!(e.stage, "smoothness");
        assert!(e.error.is_singular());
    }
}
