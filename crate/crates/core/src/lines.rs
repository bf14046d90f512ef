//! The 27 lines of a smooth cubic surface and their arithmetic.
//!
//! Every line meets the plane `x3 = 0`, so it passes through a point `P` of the
//! plane section and lies in the tangent plane `T_P`. For `Q` on an auxiliary
//! line `Λ ⊂ T_P` missing `P`, the restriction of `f` to `PQ` is
//! `s t^2 (∇f(Q)·P) + t^3 f(Q)`, so `PQ ⊂ S` iff `f(Q) = 0` and `∇f(Q)·P = 0`.
//! The roots of `f` on `Λ` come from the closed-form cubic solver, making the
//! search linear in the field size.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;

use crate::cubic::{CubicGeometry, CubicSurface};
use crate::error::{Error, Result};
use crate::ffield::{Fe, Poly, Solutions};
use crate::projgeom::{combine, dot, kernel, rank, LineP3, Point3};

pub const LINE_COUNT: usize = 27;
/// Largest extension degree searched for lines.
pub const MAX_SEARCH_DEGREE: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LineOnSurface {
    pub line: LineP3,
    /// Smallest `d` with the line defined over `F_{q^d}`.
    pub min_degree: u32,
}

#[derive(Clone, Debug)]
pub struct EckardtPoint {
    pub point: Point3,
    pub lines: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct LineConfiguration {
    geometry: Arc<CubicGeometry>,
    pub lines: Vec<LineOnSurface>,
    pub incidence: Vec<Vec<bool>>,
    /// Smallest `K` with all 27 lines over `F_{q^K}`.
    pub splitting_degree: u32,
    /// `frobenius[i]` is the index of the image of line `i` under `x -> x^q`.
    pub frobenius: Vec<usize>,
    pub eckardt: Vec<EckardtPoint>,
}

/// Lines through `p` lying on the surface, `p` a smooth point of it.
pub fn lines_through(g: &CubicGeometry, p: &Point3) -> Result<Vec<LineP3>> {
    let f = g.field();
    let plane = g.tangent_plane(p)?;
    let basis = plane.basis(f);
    let c = plane
        .coordinates(f, p)
        .expect("p lies on its tangent plane");
    // Λ spans the two basis vectors other than one with nonzero coordinate
    let skip = (0..3).rev().find(|&i| !c.coords()[i].is_zero()).unwrap();
    let rest: Vec<usize> = (0..3).filter(|&i| i != skip).collect();
    let (a, b) = (basis[rest[0]], basis[rest[1]]);
    let h = g.restrict_line(&a, &b);
    let mut cands: Vec<[Fe; 4]> = Vec::new();
    if h.iter().all(|x| x.is_zero()) {
        for (s, t) in crate::projgeom::p1_points(f) {
            cands.push(combine(f, s, &a, t, &b));
        }
    } else {
        if h[0].is_zero() {
            cands.push(a);
        }
        // Q = s a + b
        match f.solve_cubic(h[0], h[1], h[2], h[3]) {
            Solutions::Every => unreachable!("nonzero binary cubic"),
            Solutions::Finite(roots) => {
                for s in roots {
                    cands.push(combine(f, s, &a, Fe::ONE, &b));
                }
            }
        }
    }
    let mut out = Vec::new();
    for q in cands {
        if dot(f, &g.gradient(&q), p.coords()).is_zero() {
            out.push(LineP3::from_rows(f, *p.coords(), q).expect("q is off p"));
        }
    }
    Ok(out)
}

/// All lines of the surface defined over the field of `g`.
pub fn lines_over(g: &CubicGeometry) -> Result<Vec<LineP3>> {
    let pts = g.section_points();
    let found: Vec<Vec<LineP3>> = pts
        .par_iter()
        .map(|p| lines_through(g, p))
        .collect::<Result<_>>()?;
    let set: HashSet<LineP3> = found.into_iter().flatten().collect();
    let mut v: Vec<LineP3> = set.into_iter().collect();
    v.sort_by_key(|l| l.lex_key(g.field()));
    Ok(v)
}

/// Brute-force oracle: every line of `P^3` over the field, tested directly.
pub fn lines_over_brute_force(g: &CubicGeometry) -> Vec<LineP3> {
    let f = g.field();
    let q = f.size() as u64;
    let mut out = Vec::new();
    for c0 in 0..4 {
        for c1 in c0 + 1..4 {
            let free0: Vec<usize> = (c0 + 1..4).filter(|&j| j != c1).collect();
            let free1: Vec<usize> = (c1 + 1..4).collect();
            for i0 in 0..q.pow(free0.len() as u32) {
                let mut r0 = [Fe::ZERO; 4];
                r0[c0] = Fe::ONE;
                let mut v = i0;
                for &j in &free0 {
                    r0[j] = Fe((v % q) as u32);
                    v /= q;
                }
                if !g.eval(&r0).is_zero() {
                    continue;
                }
                for i1 in 0..q.pow(free1.len() as u32) {
                    let mut r1 = [Fe::ZERO; 4];
                    r1[c1] = Fe::ONE;
                    let mut v = i1;
                    for &j in &free1 {
                        r1[j] = Fe((v % q) as u32);
                        v /= q;
                    }
                    if g.restrict_line(&r0, &r1).iter().all(|x| x.is_zero()) {
                        out.push(LineP3::from_rows(f, r0, r1).unwrap());
                    }
                }
            }
        }
    }
    out.sort_by_key(|l| l.lex_key(f));
    out
}

fn min_degree(g: &CubicGeometry, l: &LineP3) -> u32 {
    let k = g.k();
    (1..=k)
        .find(|&d| k.is_multiple_of(d) && l.rows().iter().flatten().all(|&c| g.in_base_power(c, d)))
        .unwrap()
}

pub(crate) fn lcm(a: u32, b: u32) -> u32 {
    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Searches `k = 1, 2, ...` until all 27 lines have appeared, then builds the
/// configuration over `F_{q^K}`.
pub fn find_lines(s: &CubicSurface) -> Result<LineConfiguration> {
    let mut degrees: BTreeMap<u32, usize> = BTreeMap::new();
    let mut total = 0;
    let mut last_k = 0;
    for k in 1..=MAX_SEARCH_DEGREE {
        if !s.fits(k) {
            break;
        }
        last_k = k;
        let g = s.geometry(k)?;
        let lines = lines_over(&g)?;
        if lines.len() > LINE_COUNT {
            return Err(Error::Singular(format!(
                "{} lines over F_{}^{}",
                lines.len(),
                s.p(),
                s.r() * k
            )));
        }
        let new = lines.iter().filter(|l| min_degree(&g, l) == k).count();
        if new > 0 {
            degrees.insert(k, new);
        }
        total += new;
        if total > LINE_COUNT {
            return Err(Error::Singular(format!("more than {LINE_COUNT} lines")));
        }
        if total == LINE_COUNT {
            break;
        }
    }
    if total < LINE_COUNT {
        return Err(Error::SplittingOutOfRange {
            found: total,
            expected: LINE_COUNT,
            cap: s.q().saturating_pow(last_k),
        });
    }
    let big = degrees.keys().fold(1, |acc, &d| lcm(acc, d));
    if !s.fits(big) {
        return Err(Error::SplittingOutOfRange {
            found: total,
            expected: LINE_COUNT,
            cap: s.cap(),
        });
    }
    configuration(s.geometry(big)?)
}

/// Builds the configuration from a field already containing every line.
pub fn configuration(g: Arc<CubicGeometry>) -> Result<LineConfiguration> {
    let f = g.field();
    let found = lines_over(&g)?;
    if found.len() != LINE_COUNT {
        return Err(Error::Configuration(format!(
            "found {} lines over the splitting field",
            found.len()
        )));
    }
    let mut lines: Vec<LineOnSurface> = found
        .into_iter()
        .map(|line| LineOnSurface {
            min_degree: min_degree(&g, &line),
            line,
        })
        .collect();
    lines.sort_by_key(|a| (a.min_degree, a.line.lex_key(f)));
    let splitting_degree = lines.iter().fold(1, |acc, l| lcm(acc, l.min_degree));

    let n = lines.len();
    let mut incidence = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let m = lines[i].line.meets(f, &lines[j].line);
            incidence[i][j] = m;
            incidence[j][i] = m;
        }
    }
    for (i, row) in incidence.iter().enumerate() {
        let deg = row.iter().filter(|&&x| x).count();
        if deg != 10 {
            return Err(Error::Configuration(format!("line {i} meets {deg} others")));
        }
    }

    let index: HashMap<LineP3, usize> =
        lines.iter().enumerate().map(|(i, l)| (l.line, i)).collect();
    let frobenius = lines
        .iter()
        .map(|l| {
            index
                .get(&l.line.frobenius(f, g.r()))
                .copied()
                .ok_or_else(|| {
                    Error::Configuration("Frobenius image is not a line of the surface".into())
                })
        })
        .collect::<Result<Vec<usize>>>()?;

    let mut through: BTreeMap<[u32; 4], (Point3, Vec<usize>)> = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            if incidence[i][j] {
                let x = lines[i]
                    .line
                    .intersection(f, &lines[j].line)
                    .expect("meeting lines");
                let e = through.entry(x.lex_key(f)).or_insert((x, Vec::new()));
                for k in [i, j] {
                    if !e.1.contains(&k) {
                        e.1.push(k);
                    }
                }
            }
        }
    }
    let eckardt = through
        .into_values()
        .filter(|(_, ls)| ls.len() >= 3)
        .map(|(point, mut lines)| {
            lines.sort();
            EckardtPoint { point, lines }
        })
        .collect();

    Ok(LineConfiguration {
        geometry: g,
        lines,
        incidence,
        splitting_degree,
        frobenius,
        eckardt,
    })
}

impl LineConfiguration {
    /// The surface over the field the lines live in.
    pub fn geometry(&self) -> &Arc<CubicGeometry> {
        &self.geometry
    }

    pub fn incidence(&self, i: usize, j: usize) -> Result<bool> {
        if i == j {
            return Err(Error::Invalid("incidence of a line with itself".into()));
        }
        Ok(self.incidence[i][j])
    }

    pub fn row_sums(&self) -> Vec<usize> {
        self.incidence
            .iter()
            .map(|r| r.iter().filter(|&&x| x).count())
            .collect()
    }

    /// Frobenius orbits, each listed from its smallest index.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.lines.len()];
        let mut out = Vec::new();
        for i in 0..self.lines.len() {
            if seen[i] {
                continue;
            }
            let mut orbit = vec![i];
            seen[i] = true;
            let mut j = self.frobenius[i];
            while j != i {
                seen[j] = true;
                orbit.push(j);
                j = self.frobenius[j];
            }
            out.push(orbit);
        }
        out
    }

    /// Cycle lengths of the Frobenius permutation, descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.orbits().iter().map(|o| o.len()).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    fn pairwise_skew(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(a, &i)| set[a + 1..].iter().all(|&j| !self.incidence[i][j]))
    }

    /// `None` when minimal; otherwise a Frobenius-stable set of pairwise skew lines.
    /// A union of orbits is pairwise skew only if each orbit is, so the witness
    /// grows greedily from the first skew orbit.
    pub fn minimality_witness(&self) -> Option<Vec<usize>> {
        let skew: Vec<Vec<usize>> = self
            .orbits()
            .into_iter()
            .filter(|o| self.pairwise_skew(o))
            .collect();
        let first = skew.first()?;
        let mut witness = first.clone();
        for o in &skew[1..] {
            let mut trial = witness.clone();
            trial.extend(o);
            if self.pairwise_skew(&trial) {
                witness = trial;
            }
        }
        witness.sort();
        Some(witness)
    }

    pub fn is_minimal(&self) -> bool {
        self.minimality_witness().is_none()
    }

    pub fn has_rational_line(&self) -> bool {
        self.lines.iter().any(|l| l.min_degree == 1)
    }

    /// The lines mapped into a larger field of the same surface.
    pub fn lines_in(&self, big: &CubicGeometry) -> Result<Vec<LineP3>> {
        let e = self.geometry.embedding_into(big)?;
        Ok(self
            .lines
            .iter()
            .map(|l| l.line.map(|c| e.apply(c)))
            .collect())
    }
}

/// Splits `S(F_{q^k})` into points on some line and points on none.
pub fn points_on_exceptional_locus(
    s: &CubicSurface,
    cfg: &LineConfiguration,
    k: u32,
) -> Result<(Vec<Point3>, Vec<Point3>)> {
    let small = s.geometry(k)?;
    let m = lcm(k, cfg.splitting_degree.max(cfg.geometry.k()));
    if !s.fits(m) {
        return Err(Error::FieldCap {
            size: s.q().saturating_pow(m),
            cap: s.cap(),
        });
    }
    let big = s.geometry(m)?;
    let f = big.field();
    let lines = cfg.lines_in(&big)?;
    let eqs: Vec<Vec<Vec<Fe>>> = lines.iter().map(|l| l.equations(f)).collect();
    let e = small.embedding_into(&big)?;
    let (mut on, mut off) = (Vec::new(), Vec::new());
    for x in small.points()? {
        let y = x.map(|c| e.apply(c));
        let hit = eqs
            .iter()
            .any(|hs| hs.iter().all(|h| dot(f, h, y.coords()).is_zero()));
        if hit {
            on.push(x);
        } else {
            off.push(x);
        }
    }
    Ok((on, off))
}

/// Line counts through each point of `S(F_{q^k})` that lies on a line.
pub fn line_multiplicities(big: &CubicGeometry, lines: &[LineP3], pts: &[Point3]) -> Vec<usize> {
    let f = big.field();
    pts.iter()
        .map(|x| lines.iter().filter(|l| l.contains(f, x)).count())
        .collect()
}

/// Whether `x` lies on a line of `S`, decided over the field of `x`.
///
/// For `v` in `T_x`, `f(s x + t v) = s t^2 Q(v) + t^3 f(v)`, so the line `xv`
/// lies on `S` iff the binary forms `Q` and `f` on `T_x / x` share a root over
/// the closure, which a gcd detects without leaving the field.
pub fn on_some_line(g: &CubicGeometry, x: &Point3) -> Result<bool> {
    let f = g.field();
    if !g.on_surface(x) {
        return Err(Error::OffSurface);
    }
    let grad = g.gradient(x.coords());
    let tangent = kernel(f, &[grad.to_vec()], 4);
    if tangent.len() != 3 {
        return Err(Error::Singular(x.display(f)));
    }
    let mut basis: Vec<[Fe; 4]> = Vec::new();
    for v in &tangent {
        let v: [Fe; 4] = std::array::from_fn(|i| v[i]);
        let mut m: Vec<Vec<Fe>> = std::iter::once(x.coords().to_vec())
            .chain(basis.iter().map(|b| b.to_vec()))
            .collect();
        m.push(v.to_vec());
        if basis.len() < 2 && rank(f, &mut m) == basis.len() + 2 {
            basis.push(v);
        }
    }
    let [b1, b2] = [basis[0], basis[1]];
    let quad = |v: &[Fe; 4]| g.restrict_line(x.coords(), v)[2];
    let sum = std::array::from_fn(|i| f.add(b1[i], b2[i]));
    let (q1, q2) = (quad(&b1), quad(&b2));
    let q12 = f.sub(f.sub(quad(&sum), q1), q2);
    // forms in u/w for v = u b1 + w b2, ascending in u
    let qf = Poly::new(vec![q2, q12, q1]);
    let c = g.restrict_line(&b1, &b2);
    let cf = Poly::new(vec![c[3], c[2], c[1], c[0]]);
    if qf.is_zero() || cf.is_zero() {
        return Ok(true);
    }
    let at_infinity = qf.degree() < Some(2) && cf.degree() < Some(3);
    Ok(at_infinity || qf.gcd(f, &cf).degree().is_some_and(|d| d > 0))
}

/// Minimality decided from the lines of degree at most 6.
///
/// A skew set has at most six lines, and every orbit inside a stable skew set
/// is one itself, so `S` is non-minimal iff some Frobenius orbit of at most six
/// lines is pairwise skew. Returns `None` when some `F_{q^d}`, `d <= 6`, is
/// beyond the cap.
pub fn minimal_by_short_orbits(s: &CubicSurface) -> Result<Option<bool>> {
    for d in 1..=6 {
        if !s.fits(d) {
            return Ok(None);
        }
        let g = s.geometry(d)?;
        let f = g.field();
        let lines: Vec<LineP3> = lines_over(&g)?
            .into_iter()
            .filter(|l| min_degree(&g, l) == d)
            .collect();
        let mut seen: HashSet<LineP3> = HashSet::new();
        for l in &lines {
            if seen.contains(l) {
                continue;
            }
            let mut orbit = vec![*l];
            let mut m = l.frobenius(f, g.r());
            while m != *l {
                orbit.push(m);
                m = m.frobenius(f, g.r());
            }
            seen.extend(orbit.iter().copied());
            let skew = orbit
                .iter()
                .enumerate()
                .all(|(i, a)| orbit[i + 1..].iter().all(|b| !a.meets(f, b)));
            if skew {
                return Ok(Some(false));
            }
        }
    }
    Ok(Some(true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn tangent_pencil_matches_brute_force_on_fixtures() {
        for s in [fixtures::minimal_f2(), fixtures::rational_f2()] {
            for k in 1..=6 {
                let g = s.geometry(k).unwrap();
                assert_eq!(
                    lines_over(&g).unwrap(),
                    lines_over_brute_force(&g),
                    "k = {k}"
                );
            }
        }
        let s = fixtures::diagonal_f4(false);
        for k in 1..=3 {
            let g = s.geometry(k).unwrap();
            assert_eq!(
                lines_over(&g).unwrap(),
                lines_over_brute_force(&g),
                "k = {k}"
            );
        }
    }

    #[test]
    fn tangent_test_matches_line_membership() {
        for s in [
            fixtures::minimal_f2(),
            fixtures::rational_f2(),
            fixtures::diagonal_f4(true),
        ] {
            let cfg = find_lines(&s).unwrap();
            for k in 1..=2 {
                let g = s.geometry(k).unwrap();
                let (on, off) = points_on_exceptional_locus(&s, &cfg, k).unwrap();
                assert!(on.iter().all(|x| on_some_line(&g, x).unwrap()));
                assert!(off.iter().all(|x| !on_some_line(&g, x).unwrap()));
            }
        }
    }

    #[test]
    fn short_orbits_decide_minimality() {
        for s in [
            fixtures::minimal_f2(),
            fixtures::rational_f2(),
            fixtures::diagonal_f4(false),
        ] {
            let cfg = find_lines(&s).unwrap();
            assert_eq!(minimal_by_short_orbits(&s).unwrap(), Some(cfg.is_minimal()));
        }
        let capped = fixtures::minimal_f2().with_cap(32);
        assert_eq!(minimal_by_short_orbits(&capped).unwrap(), None);
    }

    #[test]
    fn minimal_f2_configuration() {
        let s = fixtures::minimal_f2();
        let cfg = find_lines(&s).unwrap();
        assert_eq!(cfg.splitting_degree, 3);
        assert!(cfg.lines.iter().all(|l| l.min_degree == 3));
        assert_eq!(cfg.cycle_type(), vec![3; 9]);
        assert_eq!(cfg.eckardt.len(), 13);
        assert!(cfg.row_sums().iter().all(|&d| d == 10));
        assert!(cfg.is_minimal());
        assert!(!cfg.has_rational_line());
    }

    #[test]
    fn rational_f2_configuration() {
        let s = fixtures::rational_f2();
        let cfg = find_lines(&s).unwrap();
        assert_eq!(cfg.splitting_degree, 6);
        assert_eq!(cfg.lines.iter().filter(|l| l.min_degree <= 3).count(), 15);
        assert_eq!(cfg.lines.iter().filter(|l| l.min_degree == 6).count(), 12);
        assert!(!cfg.is_minimal());
        let w = cfg.minimality_witness().unwrap();
        for &i in &w {
            assert!(w.contains(&cfg.frobenius[i]));
        }
    }
}
