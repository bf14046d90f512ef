//! Degree-4 del Pezzo surfaces `Q1 = Q2 = 0` in `P^4`.
//!
//! Lines are found as for cubic surfaces: each meets the hyperplane `x4 = 0`
//! at a point `P`, and lies in the tangent plane `T_P S`. For `Q` in that plane,
//! `Q_i(sP + tQ) = t^2 Q_i(Q)`, so the lines through `P` correspond to common
//! zeros of two binary quadratics on an auxiliary line of `T_P S`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::cubic::{check_base_field, check_terms, embed_terms, Term};
use crate::error::{Error, Result};
use crate::ffield::{Embedding, Fe, FieldCtx, Poly, Solutions, DEFAULT_FIELD_CAP};
use crate::lines::lcm;
use crate::projgeom::{
    combine, dot, kernel, p1_points, point_at_index, projective_size, rank, CompiledForm, HomForm,
    LineP4, Point4, ProjPoint,
};

pub const DP4_LINE_COUNT: usize = 16;
/// Largest chart (`P^3`) enumerated during the smoothness scan.
const SMOOTHNESS_BUDGET: u64 = 1 << 25;

pub struct Dp4Surface {
    p: u32,
    r: u32,
    gen_poly: Vec<u32>,
    terms: [Vec<Term>; 2],
    cap: u64,
    cache: Mutex<BTreeMap<u32, Arc<Dp4Geometry>>>,
}

impl std::fmt::Debug for Dp4Surface {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fm.debug_struct("Dp4Surface")
            .field("p", &self.p)
            .field("r", &self.r)
            .field("gen_poly", &self.gen_poly)
            .field("terms", &self.terms)
            .finish()
    }
}

impl Dp4Surface {
    pub fn new(p: u32, r: u32, gen_poly: &[u32], terms: [Vec<Term>; 2]) -> Result<Dp4Surface> {
        let gen_poly = check_base_field(p, r, gen_poly)?;
        for t in &terms {
            check_terms(p, r, 5, 2, t)?;
        }
        let s = Dp4Surface {
            p,
            r,
            gen_poly,
            terms,
            cap: DEFAULT_FIELD_CAP,
            cache: Mutex::new(BTreeMap::new()),
        };
        let g = s.geometry(1)?;
        let mut m = vec![g.forms[0].coeffs().to_vec(), g.forms[1].coeffs().to_vec()];
        if rank(g.field(), &mut m) < 2 {
            return Err(Error::Invalid(
                "the two quadrics are linearly dependent".into(),
            ));
        }
        Ok(s)
    }

    pub fn with_cap(mut self, cap: u64) -> Dp4Surface {
        self.cap = cap;
        self.cache.lock().unwrap().clear();
        self
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.r)
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn gen_poly(&self) -> &[u32] {
        &self.gen_poly
    }

    pub fn terms(&self) -> &[Vec<Term>; 2] {
        &self.terms
    }

    pub fn fits(&self, k: u32) -> bool {
        self.q().checked_pow(k).is_some_and(|s| s <= self.cap)
    }

    pub fn geometry(&self, k: u32) -> Result<Arc<Dp4Geometry>> {
        if let Some(g) = self.cache.lock().unwrap().get(&k) {
            return Ok(g.clone());
        }
        let field = FieldCtx::with_cap(self.p, self.r * k, self.cap)?;
        let alpha = field.embed_generator(&self.gen_poly)?;
        let forms = [0, 1].map(|i| embed_terms(&field, alpha, 5, 2, &self.terms[i]));
        let g = Arc::new(Dp4Geometry::new(field, self.r, k, alpha, forms));
        self.cache.lock().unwrap().insert(k, g.clone());
        Ok(g)
    }

    pub fn points(&self, k: u32) -> Result<Vec<Point4>> {
        self.geometry(k)?.points()
    }

    /// Extension degrees `k <= 4` scanned for singular points: within the field
    /// cap and the chart budget, and not dividing another such degree.
    pub fn smoothness_degrees(&self) -> Vec<u32> {
        let ok: Vec<u32> = (1..=4)
            .filter(|&k| self.fits(k) && projective_size(self.q().pow(k), 3) <= SMOOTHNESS_BUDGET)
            .collect();
        ok.iter()
            .copied()
            .filter(|&k| !ok.iter().any(|&m| m != k && m % k == 0))
            .collect()
    }

    pub fn check_smooth(&self) -> Result<Vec<u32>> {
        let ks = self.smoothness_degrees();
        for &k in &ks {
            let g = self.geometry(k)?;
            if let Some(x) = g.singular_points()?.first() {
                return Err(Error::Singular(format!(
                    "{} over F_{}^{}",
                    x.display(g.field()),
                    self.p,
                    self.r * k
                )));
            }
        }
        Ok(ks)
    }
}

#[derive(Debug)]
pub struct Dp4Geometry {
    field: FieldCtx,
    r: u32,
    k: u32,
    alpha: Fe,
    forms: [HomForm; 2],
    eval: [CompiledForm<5>; 2],
    grad: [[CompiledForm<5>; 5]; 2],
    /// `chart[i][j]`: coefficient of `x4^j` in `Q_i`.
    chart: [Vec<CompiledForm<4>>; 2],
}

/// Roots of `a x^2 + b x + c = 0` and `d x^2 + e x + g = 0` simultaneously;
/// `None` when both vanish identically.
fn common_roots(f: &FieldCtx, u: [Fe; 3], v: [Fe; 3]) -> Option<Vec<Fe>> {
    let su = f.solve_quadratic(u[2], u[1], u[0]);
    let sv = f.solve_quadratic(v[2], v[1], v[0]);
    match (su, sv) {
        (Solutions::Every, Solutions::Every) => None,
        (Solutions::Every, Solutions::Finite(r)) | (Solutions::Finite(r), Solutions::Every) => {
            Some(r.to_vec())
        }
        (Solutions::Finite(a), Solutions::Finite(b)) => {
            Some(a.into_iter().filter(|x| b.contains(x)).collect())
        }
    }
}

impl Dp4Geometry {
    pub fn new(field: FieldCtx, r: u32, k: u32, alpha: Fe, forms: [HomForm; 2]) -> Dp4Geometry {
        let grad = [0, 1].map(|i| {
            let ps = forms[i].partials(&field);
            std::array::from_fn(|j| ps[j].compile::<5>())
        });
        let chart = [0, 1].map(|i| forms[i].split_last::<4>());
        let eval = [0, 1].map(|i| forms[i].compile::<5>());
        Dp4Geometry {
            field,
            r,
            k,
            alpha,
            forms,
            eval,
            grad,
            chart,
        }
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn forms(&self) -> &[HomForm; 2] {
        &self.forms
    }

    pub fn in_base_power(&self, x: Fe, d: u32) -> bool {
        self.field.in_subfield(x, self.r * d)
    }

    pub fn eval(&self, x: &[Fe; 5]) -> [Fe; 2] {
        [
            self.eval[0].eval(&self.field, x),
            self.eval[1].eval(&self.field, x),
        ]
    }

    pub fn on_surface(&self, x: &Point4) -> bool {
        self.eval(x.coords()).iter().all(|c| c.is_zero())
    }

    pub fn gradients(&self, x: &[Fe; 5]) -> [[Fe; 5]; 2] {
        [0, 1].map(|i| std::array::from_fn(|j| self.grad[i][j].eval(&self.field, x)))
    }

    /// Coefficients of `Q_i(s a + t b)` at `s^2, s t, t^2`.
    pub fn restrict_line(&self, a: &[Fe; 5], b: &[Fe; 5]) -> [[Fe; 3]; 2] {
        let f = &self.field;
        let ea = self.eval(a);
        let eb = self.eval(b);
        let ga = self.gradients(a);
        [0, 1].map(|i| [ea[i], dot(f, &ga[i], b), eb[i]])
    }

    pub fn embedding_into(&self, big: &Dp4Geometry) -> Result<Embedding> {
        Embedding::new(&self.field, &big.field, self.alpha, big.alpha)
    }

    /// Points over this field by solving for `x4` on every point of `P^3`.
    pub fn points(&self) -> Result<Vec<Point4>> {
        let f = &self.field;
        let q = f.size() as u64;
        let total = projective_size(q, 3);
        if total > crate::projgeom::ENUMERATION_CAP {
            return Err(Error::EnumerationCap(total));
        }
        let chunk = 4096u64;
        let parts: Vec<Vec<Point4>> = (0..total.div_ceil(chunk))
            .into_par_iter()
            .map(|c| {
                let mut out = Vec::new();
                for idx in c * chunk..((c + 1) * chunk).min(total) {
                    let x: [Fe; 4] = point_at_index(q, idx);
                    let u: [Fe; 3] = std::array::from_fn(|j| self.chart[0][j].eval(f, &x));
                    let v: [Fe; 3] = std::array::from_fn(|j| self.chart[1][j].eval(f, &x));
                    let roots = common_roots(f, u, v).unwrap_or_else(|| f.elements().collect());
                    for t in roots {
                        out.push(ProjPoint::from_normalized([x[0], x[1], x[2], x[3], t]));
                    }
                }
                out
            })
            .collect();
        let mut pts: Vec<Point4> = parts.into_iter().flatten().collect();
        let apex = [Fe::ZERO, Fe::ZERO, Fe::ZERO, Fe::ZERO, Fe::ONE];
        if self.eval(&apex).iter().all(|c| c.is_zero()) {
            pts.push(ProjPoint::from_normalized(apex));
        }
        pts.sort_by_key(|p| p.lex_key(f));
        Ok(pts)
    }

    /// Oracle: every point of `P^4` tested directly.
    pub fn points_brute_force(&self) -> Result<Vec<Point4>> {
        let f = &self.field;
        let mut pts: Vec<Point4> = crate::projgeom::enum_points::<5>(f)?
            .into_par_iter()
            .filter(|x| self.on_surface(x))
            .collect();
        pts.sort_by_key(|p| p.lex_key(f));
        Ok(pts)
    }

    fn jacobian_rank(&self, x: &[Fe; 5]) -> usize {
        let g = self.gradients(x);
        let mut m = vec![g[0].to_vec(), g[1].to_vec()];
        rank(&self.field, &mut m)
    }

    pub fn singular_points(&self) -> Result<Vec<Point4>> {
        Ok(self
            .points()?
            .into_iter()
            .filter(|x| self.jacobian_rank(x.coords()) < 2)
            .collect())
    }

    /// Points of `S ∩ {x4 = 0}`, found over `(x0 : x1)` in `P^1`: the two
    /// quadrics become conics in `(x2, x3)`, `x3` is eliminated by a resultant
    /// of degree at most four in `x2`, and only its roots are followed up.
    pub fn section_points(&self) -> Vec<Point4> {
        let f = &self.field;
        let terms: [Vec<([usize; 4], Fe)>; 2] = [0, 1].map(|i| {
            self.forms[i]
                .terms()
                .into_iter()
                .filter(|(e, _)| e[4] == 0)
                .map(|(e, c)| {
                    (
                        [e[0] as usize, e[1] as usize, e[2] as usize, e[3] as usize],
                        c,
                    )
                })
                .collect()
        });
        let mut heads: Vec<(Fe, Fe)> = f.elements_lex().into_iter().map(|t| (Fe::ONE, t)).collect();
        heads.push((Fe::ZERO, Fe::ONE));
        let mut out: Vec<Point4> = heads
            .par_iter()
            .flat_map_iter(|&(x0, x1)| {
                // conic[i][a][b] is the coefficient of x2^a x3^b
                let conic = [0, 1].map(|i| {
                    let mut c = [[Fe::ZERO; 3]; 3];
                    for (e, v) in &terms[i] {
                        let w = f.mul(*v, f.mul(f.pow(x0, e[0] as u64), f.pow(x1, e[1] as u64)));
                        c[e[2]][e[3]] = f.add(c[e[2]][e[3]], w);
                    }
                    c
                });
                self.conic_intersection(&conic)
                    .into_iter()
                    .map(move |(x2, x3)| ProjPoint::from_normalized([x0, x1, x2, x3, Fe::ZERO]))
            })
            .collect();
        for (s, t) in p1_points(f) {
            let x = [Fe::ZERO, Fe::ZERO, s, t, Fe::ZERO];
            if self.eval(&x).iter().all(|c| c.is_zero()) {
                out.push(ProjPoint::new(f, x).unwrap());
            }
        }
        out.sort_by_key(|p| p.lex_key(f));
        out
    }

    /// Common affine zeros `(x2, x3)` of two conics.
    fn conic_intersection(&self, c: &[[[Fe; 3]; 3]; 2]) -> Vec<(Fe, Fe)> {
        let f = &self.field;
        // coefficients of x3^0, x3^1, x3^2 as polynomials in x2
        let coef = |i: usize| {
            [
                Poly::new(vec![c[i][0][0], c[i][1][0], c[i][2][0]]),
                Poly::new(vec![c[i][0][1], c[i][1][1]]),
                Poly::new(vec![c[i][0][2]]),
            ]
        };
        let [a0, a1, a2] = coef(0);
        let [b0, b1, b2] = coef(1);
        let sub = |x: &Poly, y: &Poly| x.add(f, &y.scale(f, f.neg(Fe::ONE)));
        let u = sub(&a2.mul(f, &b0), &a0.mul(f, &b2));
        let v = sub(&a2.mul(f, &b1), &a1.mul(f, &b2));
        let w = sub(&a1.mul(f, &b0), &a0.mul(f, &b1));
        let res = sub(&u.mul(f, &u), &v.mul(f, &w));
        let x2s = if a2.is_zero() && b2.is_zero() || res.is_zero() {
            f.elements_lex()
        } else {
            res.split_roots(f)
        };
        let at = |p: &Poly, x: Fe| f.eval_poly(p.coeffs(), x);
        let mut out = Vec::new();
        for x2 in x2s {
            let cu = [at(&a0, x2), at(&a1, x2), at(&a2, x2)];
            let cv = [at(&b0, x2), at(&b1, x2), at(&b2, x2)];
            for x3 in common_roots(f, cu, cv).unwrap_or_else(|| f.elements().collect()) {
                out.push((x2, x3));
            }
        }
        out
    }

    /// Basis of the tangent plane `T_x S` (three vectors, `x` among their span).
    pub fn tangent_space(&self, x: &Point4) -> Result<Vec<Vec<Fe>>> {
        if !self.on_surface(x) {
            return Err(Error::OffSurface);
        }
        let g = self.gradients(x.coords());
        let k = kernel(&self.field, &[g[0].to_vec(), g[1].to_vec()], 5);
        if k.len() != 3 {
            return Err(Error::Singular(x.display(&self.field)));
        }
        Ok(k)
    }

    pub fn lines_through(&self, x: &Point4) -> Result<Vec<LineP4>> {
        let f = &self.field;
        let basis = self.tangent_space(x)?;
        // write x in the basis and drop a vector carrying a nonzero coefficient
        let mut m: Vec<Vec<Fe>> = basis.clone();
        m.push(x.coords().to_vec());
        let rel = kernel(f, &transpose(&m), 4);
        debug_assert_eq!(rel.len(), 1);
        let skip = (0..3)
            .rev()
            .find(|&i| !rel[0][i].is_zero())
            .expect("x lies in its tangent space");
        let rest: Vec<usize> = (0..3).filter(|&i| i != skip).collect();
        let a: [Fe; 5] = std::array::from_fn(|j| basis[rest[0]][j]);
        let b: [Fe; 5] = std::array::from_fn(|j| basis[rest[1]][j]);
        let h = self.restrict_line(&a, &b);
        let mut cands: Vec<[Fe; 5]> = Vec::new();
        if h.iter().flatten().all(|c| c.is_zero()) {
            for (s, t) in p1_points(f) {
                cands.push(combine(f, s, &a, t, &b));
            }
        } else {
            if h[0][0].is_zero() && h[1][0].is_zero() {
                cands.push(a);
            }
            // Q = s a + b: coefficients in s are (t^2, s t, s^2) = (h[.][2], h[.][1], h[.][0])
            let u = [h[0][2], h[0][1], h[0][0]];
            let v = [h[1][2], h[1][1], h[1][0]];
            for s in common_roots(f, u, v).expect("not both zero") {
                cands.push(combine(f, s, &a, Fe::ONE, &b));
            }
        }
        Ok(cands
            .into_iter()
            .map(|q| LineP4::from_rows(f, *x.coords(), q).expect("q is off x"))
            .collect())
    }

    pub fn lines_over(&self) -> Result<Vec<LineP4>> {
        let pts = self.section_points();
        let found: Vec<Vec<LineP4>> = pts
            .par_iter()
            .map(|p| self.lines_through(p))
            .collect::<Result<_>>()?;
        let set: HashSet<LineP4> = found.into_iter().flatten().collect();
        let mut v: Vec<LineP4> = set.into_iter().collect();
        v.sort_by_key(|l| l.lex_key(&self.field));
        Ok(v)
    }

    /// Oracle: lines joining pairs of surface points.
    pub fn lines_over_point_pairs(&self) -> Result<Vec<LineP4>> {
        let f = &self.field;
        let pts = self.points()?;
        let mut set = HashSet::new();
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                let h = self.restrict_line(a.coords(), b.coords());
                if h.iter().flatten().all(|c| c.is_zero()) {
                    set.insert(LineP4::from_rows(f, *a.coords(), *b.coords()).unwrap());
                }
            }
        }
        let mut v: Vec<LineP4> = set.into_iter().collect();
        v.sort_by_key(|l| l.lex_key(f));
        Ok(v)
    }

    fn min_degree(&self, l: &LineP4) -> u32 {
        let k = self.k;
        (1..=k)
            .find(|&d| {
                k.is_multiple_of(d) && l.rows().iter().flatten().all(|&c| self.in_base_power(c, d))
            })
            .unwrap()
    }
}

fn transpose(m: &[Vec<Fe>]) -> Vec<Vec<Fe>> {
    (0..m[0].len())
        .map(|j| m.iter().map(|r| r[j]).collect())
        .collect()
}

#[derive(Clone, Debug)]
pub struct Dp4Lines {
    geometry: Arc<Dp4Geometry>,
    pub lines: Vec<(LineP4, u32)>,
    pub incidence: Vec<Vec<bool>>,
    pub splitting_degree: u32,
    pub frobenius: Vec<usize>,
}

impl Dp4Lines {
    pub fn geometry(&self) -> &Arc<Dp4Geometry> {
        &self.geometry
    }

    pub fn row_sums(&self) -> Vec<usize> {
        self.incidence
            .iter()
            .map(|r| r.iter().filter(|&&x| x).count())
            .collect()
    }

    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.lines.len();
        let mut seen = vec![false; n];
        let mut v = Vec::new();
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let mut len = 0;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                len += 1;
                j = self.frobenius[j];
            }
            v.push(len);
        }
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }
}

/// Searches extension degrees upward until 16 lines have appeared.
pub fn find_dp4_lines(s: &Dp4Surface) -> Result<Dp4Lines> {
    let mut degrees = Vec::new();
    let mut total = 0;
    let mut last_k = 0;
    let mut seen = HashMap::new();
    for k in 1..=crate::lines::MAX_SEARCH_DEGREE {
        if !s.fits(k) {
            break;
        }
        last_k = k;
        let g = s.geometry(k)?;
        let lines = g.lines_over()?;
        if lines.len() > DP4_LINE_COUNT {
            return Err(Error::Singular(format!(
                "{} lines over F_{}^{}",
                lines.len(),
                s.p(),
                s.r() * k
            )));
        }
        let new = lines.iter().filter(|l| g.min_degree(l) == k).count();
        if new > 0 {
            degrees.push(k);
        }
        total += new;
        seen.insert(k, (g, lines));
        if total >= DP4_LINE_COUNT {
            break;
        }
    }
    if total != DP4_LINE_COUNT {
        if total > DP4_LINE_COUNT {
            return Err(Error::Singular(format!("more than {DP4_LINE_COUNT} lines")));
        }
        return Err(Error::SplittingOutOfRange {
            found: total,
            expected: DP4_LINE_COUNT,
            cap: s.q().saturating_pow(last_k),
        });
    }
    let big = degrees.iter().fold(1, |acc, &d| lcm(acc, d));
    if !s.fits(big) {
        return Err(Error::SplittingOutOfRange {
            found: total,
            expected: DP4_LINE_COUNT,
            cap: s.cap(),
        });
    }
    let (g, found) = match seen.remove(&big) {
        Some(hit) => hit,
        None => {
            let g = s.geometry(big)?;
            let found = g.lines_over()?;
            (g, found)
        }
    };
    let f = g.field();
    if found.len() != DP4_LINE_COUNT {
        return Err(Error::Configuration(format!(
            "found {} lines over the splitting field",
            found.len()
        )));
    }
    let mut lines: Vec<(LineP4, u32)> = found.into_iter().map(|l| (l, g.min_degree(&l))).collect();
    lines.sort_by_key(|a| (a.1, a.0.lex_key(f)));
    let n = lines.len();
    let mut incidence = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let m = lines[i].0.meets(f, &lines[j].0);
            incidence[i][j] = m;
            incidence[j][i] = m;
        }
    }
    let index: HashMap<LineP4, usize> = lines.iter().enumerate().map(|(i, l)| (l.0, i)).collect();
    let frobenius = lines
        .iter()
        .map(|l| {
            index.get(&l.0.frobenius(f, g.r())).copied().ok_or_else(|| {
                Error::Configuration("Frobenius image is not a line of the surface".into())
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let splitting_degree = lines.iter().fold(1, |acc, l| lcm(acc, l.1));
    Ok(Dp4Lines {
        geometry: g,
        lines,
        incidence,
        splitting_degree,
        frobenius,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Dp4Case {
    /// A rational point on no line.
    I,
    /// Every rational point on a line, some on exactly one.
    II,
    /// Every rational point on two lines.
    III,
}

/// One of the two conic bundles attached to a point on two lines.
#[derive(Clone, Debug, serde::Serialize)]
pub struct Dp4Bundle {
    /// The pair of lines spanning the base plane of the hyperplane pencil.
    pub axis: [usize; 2],
    /// Line pairs forming the singular fibers.
    pub singular_fibers: Vec<[usize; 2]>,
    /// Singular fibers mapped to themselves by Frobenius.
    pub rational_singular: usize,
    /// Whether some fiber over `F_q` is a smooth conic.
    pub smooth_rational_fiber: bool,
}

#[derive(Clone, Debug)]
pub struct Dp4Classification {
    /// Rational points with the indices of the lines through them.
    pub points: Vec<(Point4, Vec<usize>)>,
    pub case: Dp4Case,
    pub bundles: Option<[Dp4Bundle; 2]>,
}

impl Dp4Classification {
    /// Case (iii) with neither bundle admitting a smooth rational fiber.
    pub fn is_obstructed(&self) -> bool {
        self.bundles
            .as_ref()
            .is_some_and(|b| b.iter().all(|x| !x.smooth_rational_fiber))
    }

    pub fn max_lines_per_point(&self) -> usize {
        self.points.iter().map(|(_, l)| l.len()).max().unwrap_or(0)
    }
}

fn span_rank(f: &FieldCtx, lines: &[&LineP4]) -> usize {
    let mut m: Vec<Vec<Fe>> = lines
        .iter()
        .flat_map(|l| l.rows().iter().map(|r| r.to_vec()))
        .collect();
    rank(f, &mut m)
}

/// Conic bundle cut by hyperplanes through the plane spanned by `axis`.
fn bundle(cfg: &Dp4Lines, axis: [usize; 2], q: u64) -> Dp4Bundle {
    let f = cfg.geometry.field();
    let l = |i: usize| &cfg.lines[i].0;
    let mut by_plane: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
    for m in 0..cfg.lines.len() {
        if axis.contains(&m) || span_rank(f, &[l(axis[0]), l(axis[1]), l(m)]) != 4 {
            continue;
        }
        let mut rows: Vec<Vec<Fe>> = [l(axis[0]), l(axis[1]), l(m)]
            .iter()
            .flat_map(|x| x.rows().iter().map(|r| r.to_vec()))
            .collect();
        crate::projgeom::rref(f, &mut rows);
        let key = rows.iter().flatten().map(|&c| f.lex_key(c)).collect();
        by_plane.entry(key).or_default().push(m);
    }
    let singular_fibers: Vec<[usize; 2]> = by_plane
        .into_values()
        .map(|v| {
            let mut pair = [v[0], *v.get(1).unwrap_or(&v[0])];
            pair.sort();
            pair
        })
        .collect();
    let rational_singular = singular_fibers
        .iter()
        .filter(|pr| {
            let mut img = [cfg.frobenius[pr[0]], cfg.frobenius[pr[1]]];
            img.sort();
            img == **pr
        })
        .count();
    Dp4Bundle {
        axis,
        rational_singular,
        smooth_rational_fiber: (rational_singular as u64) < q + 1,
        singular_fibers,
    }
}

/// The two conic bundles attached to a pair of meeting lines `L1, L2`: hyperplanes
/// through a plane spanned by lines `L3, L4` with `L3` meeting only `L1` and `L4`
/// meeting only `L2` (class `L1 + L2`), and hyperplanes through the plane of
/// `L1, L2` (class `-K - L1 - L2`).
pub fn conic_bundles(cfg: &Dp4Lines, pair: [usize; 2], q: u64) -> Result<[Dp4Bundle; 2]> {
    let f = cfg.geometry.field();
    let [l1, l2] = pair;
    let inc = &cfg.incidence;
    let n = cfg.lines.len();
    if !inc[l1][l2] {
        return Err(Error::Configuration("the lines are skew".into()));
    }
    let (a, b) = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .find(|&(a, b)| {
            inc[a][b]
                && inc[a][l1]
                && !inc[a][l2]
                && inc[b][l2]
                && !inc[b][l1]
                && span_rank(
                    f,
                    &[
                        &cfg.lines[l1].0,
                        &cfg.lines[l2].0,
                        &cfg.lines[a].0,
                        &cfg.lines[b].0,
                    ],
                ) == 4
        })
        .ok_or_else(|| Error::Configuration("no complementary line pair".into()))?;
    Ok([bundle(cfg, [a, b], q), bundle(cfg, [l1, l2], q)])
}

/// Tags each rational point with its lines and decides the surface's case.
pub fn classify_points(s: &Dp4Surface, cfg: &Dp4Lines) -> Result<Dp4Classification> {
    let small = s.geometry(1)?;
    let big = cfg.geometry.clone();
    let f = big.field();
    let e = small.embedding_into(&big)?;
    let pts = small.points()?;
    if pts.is_empty() {
        return Err(Error::Configuration("no rational points".into()));
    }
    let points: Vec<(Point4, Vec<usize>)> = pts
        .iter()
        .map(|x| {
            let y = x.map(|c| e.apply(c));
            let ls = (0..cfg.lines.len())
                .filter(|&i| cfg.lines[i].0.contains(f, &y))
                .collect();
            (*x, ls)
        })
        .collect();
    let case = if points.iter().any(|(_, l)| l.is_empty()) {
        Dp4Case::I
    } else if points.iter().any(|(_, l)| l.len() == 1) {
        Dp4Case::II
    } else {
        Dp4Case::III
    };
    let bundles = match case {
        Dp4Case::III => Some(conic_bundles(cfg, [points[0].1[0], points[0].1[1]], s.q())?),
        _ => None,
    };
    Ok(Dp4Classification {
        points,
        case,
        bundles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn diagonal_fixture() {
        let s = fixtures::dp4("dp4-diagonal-f5").unwrap();
        s.check_smooth().unwrap();
        for k in 1..=2 {
            let g = s.geometry(k).unwrap();
            assert_eq!(g.points().unwrap(), g.points_brute_force().unwrap());
            assert_eq!(g.points().unwrap().len() as u64 % 5, 1);
        }
        let cfg = find_dp4_lines(&s).unwrap();
        assert_eq!(cfg.lines.len(), 16);
        assert!(cfg.row_sums().iter().all(|&d| d == 5));
        let c = classify_points(&s, &cfg).unwrap();
        assert!(c.max_lines_per_point() <= 2);
    }

    #[test]
    fn section_points_match_the_chart_scan() {
        for name in ["dp4-f2", "dp4-f3", "dp4-diagonal-f5"] {
            let s = fixtures::dp4(name).unwrap();
            for k in 1..=2 {
                let g = s.geometry(k).unwrap();
                let mut expected: Vec<Point4> = g
                    .points()
                    .unwrap()
                    .into_iter()
                    .filter(|x| x.coords()[4] == Fe::ZERO)
                    .collect();
                expected.sort_by_key(|p| p.lex_key(g.field()));
                assert_eq!(g.section_points(), expected, "{name} k={k}");
            }
        }
    }

    #[test]
    fn section_pencil_matches_point_pairs() {
        for name in ["dp4-f2", "dp4-f3"] {
            let s = fixtures::dp4(name).unwrap();
            for k in 1..=3 {
                if s.q().pow(k) > 27 {
                    break;
                }
                let g = s.geometry(k).unwrap();
                assert_eq!(
                    g.lines_over().unwrap(),
                    g.lines_over_point_pairs().unwrap(),
                    "{name} k={k}"
                );
            }
        }
    }

    #[test]
    fn bundles_have_four_singular_fibers() {
        for name in ["dp4-diagonal-f5", "dp4-f3"] {
            let s = fixtures::dp4(name).unwrap();
            let cfg = find_dp4_lines(&s).unwrap();
            let n = cfg.lines.len();
            let mut tried = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if !cfg.incidence[a][b] {
                        continue;
                    }
                    for bd in conic_bundles(&cfg, [a, b], s.q()).unwrap() {
                        assert_eq!(bd.singular_fibers.len(), 4, "{name}");
                        assert!(bd
                            .singular_fibers
                            .iter()
                            .all(|p| p[0] != p[1] && cfg.incidence[p[0]][p[1]]));
                    }
                    tried += 1;
                }
            }
            assert_eq!(tried, 40);
        }
    }
}
