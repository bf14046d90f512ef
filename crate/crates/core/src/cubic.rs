//! Cubic surfaces `f = 0` in `P^3` with coefficients in `F_q`, `q = p^r`.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ffield::{self, Embedding, Fe, FieldCtx, Solutions, DEFAULT_FIELD_CAP};
use crate::projgeom::{dot, CompiledForm, HomForm, PlaneP3, Point2, Point3, ProjPoint};

/// A monomial record: exponent tuple and a coefficient given as an `F_p`-polynomial
/// in the base-field generator (ascending).
pub type Term = (Vec<u8>, Vec<u32>);

/// Checks the base field description shared by cubic and dP4 surfaces and
/// returns the generator polynomial (`t` for prime fields).
pub(crate) fn check_base_field(p: u32, r: u32, gen_poly: &[u32]) -> Result<Vec<u32>> {
    if !ffield::is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if r == 0 {
        return Err(Error::Invalid("r must be positive".into()));
    }
    if r == 1 && gen_poly.is_empty() {
        return Ok(vec![0, 1]);
    }
    if gen_poly.len() != r as usize + 1 || gen_poly[r as usize] != 1 {
        return Err(Error::Invalid(format!(
            "gen_poly must be monic of degree {r}"
        )));
    }
    if gen_poly.iter().any(|&c| c >= p) {
        return Err(Error::Invalid(
            "gen_poly coefficients must be reduced mod p".into(),
        ));
    }
    if !ffield::is_irreducible(gen_poly, p) {
        return Err(Error::Invalid("gen_poly is reducible".into()));
    }
    Ok(gen_poly.to_vec())
}

pub(crate) fn check_terms(
    p: u32,
    r: u32,
    nvars: usize,
    degree: usize,
    terms: &[Term],
) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for (i, (e, v)) in terms.iter().enumerate() {
        if e.len() != nvars || e.iter().map(|&x| x as usize).sum::<usize>() != degree {
            return Err(Error::Malformed(format!(
                "record {i}: exponent tuple {e:?} is not a degree-{degree} monomial in {nvars} variables"
            )));
        }
        if !seen.insert(e.clone()) {
            return Err(Error::Malformed(format!(
                "record {i}: repeated monomial {e:?}"
            )));
        }
        if v.len() > r as usize || v.iter().any(|&c| c >= p) {
            return Err(Error::Malformed(format!(
                "record {i}: value {v:?} is not an F_p-vector of length at most {r}"
            )));
        }
    }
    Ok(())
}

/// Image of sparse base-field terms in a field containing `F_q`, with `alpha` the
/// image of the base generator.
pub(crate) fn embed_terms(
    f: &FieldCtx,
    alpha: Fe,
    nvars: usize,
    degree: usize,
    terms: &[Term],
) -> HomForm {
    let t: Vec<(Vec<u8>, Fe)> = terms
        .iter()
        .map(|(e, v)| (e.clone(), f.eval_prime_poly(v, alpha)))
        .collect();
    HomForm::from_terms(f, nvars, degree, &t).expect("terms validated")
}

/// Upper bound on the `q^{2k}` chart size of a smoothness scan at `k = 5, 6`.
pub const SMOOTHNESS_BUDGET: u64 = 1 << 22;

/// Extension degrees `k <= 6` to scan for singular points: every `k <= 4`
/// within the cap, and `k = 5, 6` when they also fit the chart budget, keeping
/// only degrees that are not proper divisors of another. Covering every
/// `k <= 4` is enough, since a singular cubic surface has at most four isolated
/// singular points or else a singular point over `F_q` or `F_{q^2}`.
pub(crate) fn smoothness_degrees(q: u64, cap: u64) -> Vec<u32> {
    let ok: Vec<u32> = (1..=6)
        .filter(|&k| {
            q.checked_pow(k).is_some_and(|s| s <= cap)
                && (k <= 4 || q.checked_pow(2 * k).is_some_and(|s| s <= SMOOTHNESS_BUDGET))
        })
        .collect();
    ok.iter()
        .copied()
        .filter(|&k| !ok.iter().any(|&m| m != k && m % k == 0))
        .collect()
}

pub struct CubicSurface {
    p: u32,
    r: u32,
    gen_poly: Vec<u32>,
    terms: Vec<Term>,
    cap: u64,
    cache: Mutex<BTreeMap<u32, Arc<CubicGeometry>>>,
}

impl std::fmt::Debug for CubicSurface {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fm.debug_struct("CubicSurface")
            .field("p", &self.p)
            .field("r", &self.r)
            .field("gen_poly", &self.gen_poly)
            .field("terms", &self.terms)
            .finish()
    }
}

impl CubicSurface {
    pub fn new(p: u32, r: u32, gen_poly: &[u32], terms: Vec<Term>) -> Result<CubicSurface> {
        let gen_poly = check_base_field(p, r, gen_poly)?;
        check_terms(p, r, 4, 3, &terms)?;
        if terms.iter().all(|(_, v)| v.iter().all(|&c| c == 0)) {
            return Err(Error::Invalid(
                "the zero form does not define a surface".into(),
            ));
        }
        Ok(CubicSurface {
            p,
            r,
            gen_poly,
            terms,
            cap: DEFAULT_FIELD_CAP,
            cache: Mutex::new(BTreeMap::new()),
        })
    }

    /// Sets the largest field size any analysis of this surface may construct.
    pub fn with_cap(mut self, cap: u64) -> CubicSurface {
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

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// True iff `F_{q^k}` fits under the cap.
    pub fn fits(&self, k: u32) -> bool {
        self.q().checked_pow(k).is_some_and(|s| s <= self.cap)
    }

    /// The surface over `F_{q^k}`, built once and cached.
    pub fn geometry(&self, k: u32) -> Result<Arc<CubicGeometry>> {
        if let Some(g) = self.cache.lock().unwrap().get(&k) {
            return Ok(g.clone());
        }
        let field = FieldCtx::with_cap(self.p, self.r * k, self.cap)?;
        let alpha = field.embed_generator(&self.gen_poly)?;
        let form = embed_terms(&field, alpha, 4, 3, &self.terms);
        let g = Arc::new(CubicGeometry::new(field, self.r, k, alpha, form));
        self.cache.lock().unwrap().insert(k, g.clone());
        Ok(g)
    }

    /// `S(F_{q^k})`, sorted by coordinate lex order.
    pub fn surface_points(&self, k: u32) -> Result<Vec<Point3>> {
        self.geometry(k)?.points()
    }

    pub fn singular_points(&self, k: u32) -> Result<Vec<Point3>> {
        self.geometry(k)?.singular_points()
    }

    /// Scans for singular points over the extensions chosen by `smoothness_degrees`.
    pub fn check_smooth(&self) -> Result<Vec<u32>> {
        let ks = smoothness_degrees(self.q(), self.cap);
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

/// A cubic surface over a concrete field `F_{q^k}`.
#[derive(Debug)]
pub struct CubicGeometry {
    field: FieldCtx,
    r: u32,
    k: u32,
    alpha: Fe,
    form: HomForm,
    eval: CompiledForm<4>,
    grad: [CompiledForm<4>; 4],
    /// `chart[j]` is the coefficient of `x3^j`.
    chart: Vec<CompiledForm<3>>,
    /// Coefficients of `x2^j` in `f(x0, x1, x2, 0)`.
    section: Vec<CompiledForm<2>>,
}

impl CubicGeometry {
    pub fn new(field: FieldCtx, r: u32, k: u32, alpha: Fe, form: HomForm) -> CubicGeometry {
        let grads = form.partials(&field);
        let grad = std::array::from_fn(|i| grads[i].compile::<4>());
        let chart = form.split_last::<3>();
        let e = |i: usize| {
            let mut v = [Fe::ZERO; 4];
            v[i] = Fe::ONE;
            v
        };
        let plane = form.substitute(&field, &[&e(0), &e(1), &e(2)]);
        let section = plane.split_last::<2>();
        CubicGeometry {
            eval: form.compile::<4>(),
            grad,
            chart,
            section,
            field,
            r,
            k,
            alpha,
            form,
        }
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    /// Extension degree over the base field `F_q`.
    pub fn k(&self) -> u32 {
        self.k
    }

    /// `q = p^r`.
    pub fn r(&self) -> u32 {
        self.r
    }

    /// Image of the base-field generator.
    pub fn alpha(&self) -> Fe {
        self.alpha
    }

    pub fn form(&self) -> &HomForm {
        &self.form
    }

    /// `x -> x^q`.
    pub fn frob(&self, x: Fe) -> Fe {
        self.field.frob_power(x, self.r)
    }

    /// True iff `x` lies in `F_{q^d}`.
    pub fn in_base_power(&self, x: Fe, d: u32) -> bool {
        self.field.in_subfield(x, self.r * d)
    }

    pub fn eval(&self, x: &[Fe; 4]) -> Fe {
        self.eval.eval(&self.field, x)
    }

    pub fn gradient(&self, x: &[Fe; 4]) -> [Fe; 4] {
        std::array::from_fn(|i| self.grad[i].eval(&self.field, x))
    }

    pub fn on_surface(&self, x: &Point3) -> bool {
        self.eval(x.coords()).is_zero()
    }

    /// Coefficients of `f(s a + t b)` at `s^3, s^2 t, s t^2, t^3`.
    pub fn restrict_line(&self, a: &[Fe; 4], b: &[Fe; 4]) -> [Fe; 4] {
        let f = &self.field;
        [
            self.eval(a),
            dot(f, &self.gradient(a), b),
            dot(f, &self.gradient(b), a),
            self.eval(b),
        ]
    }

    /// Embedding of this field into the field of `big` compatible with the surface.
    pub fn embedding_into(&self, big: &CubicGeometry) -> Result<Embedding> {
        Embedding::new(&self.field, &big.field, self.alpha, big.alpha)
    }

    fn chart_point(&self, q: u64, idx: u64) -> [Fe; 3] {
        let q2 = q * q;
        if idx < q2 {
            [Fe::ONE, Fe((idx / q) as u32), Fe((idx % q) as u32)]
        } else if idx < q2 + q {
            [Fe::ZERO, Fe::ONE, Fe((idx - q2) as u32)]
        } else {
            [Fe::ZERO, Fe::ZERO, Fe::ONE]
        }
    }

    /// Runs `visit` on every point of `S(F_{q^k})` in parallel chunks and
    /// concatenates the outputs in chart order.
    fn scan<T: Send>(&self, visit: impl Fn(&[Fe; 4], &mut Vec<T>) + Sync) -> Result<Vec<T>> {
        let f = &self.field;
        let q = f.size() as u64;
        let total = q * q + q + 1;
        if total > crate::projgeom::ENUMERATION_CAP {
            return Err(Error::EnumerationCap(total));
        }
        let chunk = 4096u64;
        let chunks = total.div_ceil(chunk);
        let parts: Vec<Vec<T>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut out = Vec::new();
                for idx in c * chunk..((c + 1) * chunk).min(total) {
                    let x = self.chart_point(q, idx);
                    let a: [Fe; 4] = std::array::from_fn(|j| self.chart[j].eval(f, &x));
                    match f.solve_cubic(a[3], a[2], a[1], a[0]) {
                        Solutions::Every => {
                            for t in f.elements() {
                                visit(&[x[0], x[1], x[2], t], &mut out);
                            }
                        }
                        Solutions::Finite(roots) => {
                            for t in roots {
                                visit(&[x[0], x[1], x[2], t], &mut out);
                            }
                        }
                    }
                }
                out
            })
            .collect();
        let mut out: Vec<T> = parts.into_iter().flatten().collect();
        let apex = [Fe::ZERO, Fe::ZERO, Fe::ZERO, Fe::ONE];
        if self.eval(&apex).is_zero() {
            visit(&apex, &mut out);
        }
        Ok(out)
    }

    /// `S(F_{q^k})`, sorted by coordinate lex order.
    pub fn points(&self) -> Result<Vec<Point3>> {
        let mut pts = self.scan(|x, out| out.push(ProjPoint::new(&self.field, *x).unwrap()))?;
        pts.sort_by_key(|p| p.lex_key(&self.field));
        Ok(pts)
    }

    pub fn point_count(&self) -> Result<u64> {
        Ok(self.scan(|_, out: &mut Vec<()>| out.push(()))?.len() as u64)
    }

    pub fn singular_points(&self) -> Result<Vec<Point3>> {
        let f = &self.field;
        let mut pts = self.scan(|x, out| {
            if self.gradient(x).iter().all(|g| g.is_zero()) {
                out.push(ProjPoint::new(f, *x).unwrap());
            }
        })?;
        pts.sort_by_key(|p| p.lex_key(f));
        Ok(pts)
    }

    /// Points of the plane section `S ∩ {x3 = 0}` over this field.
    pub fn section_points(&self) -> Vec<Point3> {
        let f = &self.field;
        let mut out = Vec::new();
        let mut push =
            |x0: Fe, x1: Fe, x2: Fe| out.push(ProjPoint::from_normalized([x0, x1, x2, Fe::ZERO]));
        for (x0, x1) in crate::projgeom::p1_points(f) {
            let a: [Fe; 4] = std::array::from_fn(|j| self.section[j].eval(f, &[x0, x1]));
            match f.solve_cubic(a[3], a[2], a[1], a[0]) {
                Solutions::Every => f.elements().for_each(|t| push(x0, x1, t)),
                Solutions::Finite(roots) => roots.into_iter().for_each(|t| push(x0, x1, t)),
            }
        }
        if self.section[3].eval(f, &[Fe::ZERO, Fe::ZERO]).is_zero() {
            push(Fe::ZERO, Fe::ZERO, Fe::ONE);
        }
        out
    }

    pub fn tangent_plane(&self, x: &Point3) -> Result<PlaneP3> {
        if !self.on_surface(x) {
            return Err(Error::OffSurface);
        }
        PlaneP3::new(&self.field, self.gradient(x.coords()))
            .ok_or_else(|| Error::Singular(x.display(&self.field)))
    }

    /// The tangent-plane section at `x` as a ternary cubic in the plane's
    /// basis coordinates, together with the plane coordinates of `x`.
    pub fn tangent_cubic(&self, x: &Point3) -> Result<TangentCubic> {
        let plane = self.tangent_plane(x)?;
        let basis = plane.basis(&self.field);
        let form = self
            .form
            .substitute(&self.field, &[&basis[0], &basis[1], &basis[2]]);
        let point = plane
            .coordinates(&self.field, x)
            .expect("point lies on its tangent plane");
        Ok(TangentCubic {
            plane,
            basis,
            form,
            point,
        })
    }
}

/// A plane cubic `C = T_x S ∩ S` with its distinguished singular point.
#[derive(Clone, Debug)]
pub struct TangentCubic {
    pub plane: PlaneP3,
    pub basis: [[Fe; 4]; 3],
    pub form: HomForm,
    pub point: Point2,
}

impl TangentCubic {
    /// Point of `P^3` with the given plane coordinates.
    pub fn lift(&self, f: &FieldCtx, c: &[Fe; 3]) -> Point3 {
        let v: [Fe; 4] = std::array::from_fn(|j| {
            (0..3).fold(Fe::ZERO, |acc, i| f.add(acc, f.mul(c[i], self.basis[i][j])))
        });
        ProjPoint::new(f, v).expect("basis is independent")
    }

    /// Lines of the plane (as dual coordinates) dividing the curve.
    pub fn linear_factors(&self, f: &FieldCtx) -> Result<Vec<Point2>> {
        let mut out = Vec::new();
        for l in crate::projgeom::enum_points::<3>(f)? {
            let k = crate::projgeom::kernel(f, &[l.coords().to_vec()], 3);
            if self.form.restrict_line(f, &k[0], &k[1]).is_zero() {
                out.push(l);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fermat(p: u32) -> CubicSurface {
        let terms = (0..4)
            .map(|i| {
                (
                    (0..4).map(|j| if j == i { 3 } else { 0 }).collect(),
                    vec![1],
                )
            })
            .collect();
        CubicSurface::new(p, 1, &[], terms).unwrap()
    }

    #[test]
    fn smoothness_degree_sets() {
        assert_eq!(smoothness_degrees(2, 8192), vec![4, 5, 6]);
        assert_eq!(smoothness_degrees(5, 8192), vec![3, 4]);
        assert_eq!(smoothness_degrees(3, 8192), vec![4, 5, 6]);
        assert_eq!(smoothness_degrees(7, 8192), vec![3, 4]);
        assert_eq!(smoothness_degrees(11, 8192), vec![2, 3]);
    }

    #[test]
    fn chart_enumeration_matches_full_scan() {
        for (p, k) in [(2, 1), (2, 2), (3, 1), (5, 1), (2, 3)] {
            let s = fermat(p);
            let g = s.geometry(k).unwrap();
            let f = g.field();
            let brute: Vec<Point3> = crate::projgeom::enum_points::<4>(f)
                .unwrap()
                .into_iter()
                .filter(|x| g.on_surface(x))
                .collect();
            let mut b = brute.clone();
            b.sort_by_key(|x| x.lex_key(f));
            assert_eq!(g.points().unwrap(), b);
            assert_eq!(b.len() as u64 % p as u64, 1);
        }
    }

    #[test]
    fn cone_is_singular_at_apex() {
        let terms = (0..3)
            .map(|i| {
                (
                    (0..4).map(|j| if j == i { 3 } else { 0 }).collect(),
                    vec![1],
                )
            })
            .collect();
        let s = CubicSurface::new(7, 1, &[], terms).unwrap();
        let sing = s.singular_points(1).unwrap();
        let f = s.geometry(1).unwrap();
        let apex = ProjPoint::new(f.field(), [Fe::ZERO, Fe::ZERO, Fe::ZERO, Fe::ONE]).unwrap();
        assert!(sing.contains(&apex));
        assert!(s.check_smooth().unwrap_err().is_singular());
    }

    #[test]
    fn fermat_tangent_plane_over_f5() {
        let s = fermat(5);
        let g = s.geometry(1).unwrap();
        let f = g.field();
        let x = ProjPoint::new(f, [Fe::ONE, f.from_int(-1), Fe::ZERO, Fe::ZERO]).unwrap();
        let t = g.tangent_plane(&x).unwrap();
        assert_eq!(t.dual(), &[Fe::ONE, Fe::ONE, Fe::ZERO, Fe::ZERO]);
        let c = g.tangent_cubic(&x).unwrap();
        let parts = c.form.partials(f);
        for d in &parts {
            assert!(d.eval(f, c.point.coords()).is_zero());
        }
    }

    #[test]
    fn section_points_match_filter() {
        let s = fermat(2);
        for k in 1..=4 {
            let g = s.geometry(k).unwrap();
            let mut a = g.section_points();
            let mut b: Vec<Point3> = g
                .points()
                .unwrap()
                .into_iter()
                .filter(|x| x.coords()[3].is_zero())
                .collect();
            a.sort_by_key(|x| x.lex_key(g.field()));
            b.sort_by_key(|x| x.lex_key(g.field()));
            assert_eq!(a, b);
        }
    }

    #[test]
    fn rejects_bad_terms() {
        assert!(matches!(
            CubicSurface::new(2, 1, &[], vec![(vec![1, 1, 0], vec![1])]),
            Err(Error::Malformed(_))
        ));
        assert!(matches!(
            CubicSurface::new(
                2,
                1,
                &[],
                vec![(vec![3, 0, 0, 0], vec![1]), (vec![3, 0, 0, 0], vec![1])]
            ),
            Err(Error::Malformed(_))
        ));
        assert!(CubicSurface::new(2, 2, &[1, 0, 1], vec![(vec![3, 0, 0, 0], vec![1])]).is_err());
        assert!(CubicSurface::new(4, 1, &[], vec![(vec![3, 0, 0, 0], vec![1])]).is_err());
    }

    #[test]
    fn tangent_cubic_factors_follow_lines() {
        let s = crate::fixtures::minimal_f2();
        let cfg = crate::lines::find_lines(&s).unwrap();
        let g = s.geometry(3).unwrap();
        let f = g.field();
        let lines = cfg.lines_in(&g).unwrap();
        let (on, off) = crate::lines::points_on_exceptional_locus(&s, &cfg, 2).unwrap();
        assert!(on.len() == 1 && off.len() == 8);
        let g2 = s.geometry(2).unwrap();
        for x in off.iter().take(3) {
            let tc = g2.tangent_cubic(x).unwrap();
            assert!(tc.linear_factors(g2.field()).unwrap().is_empty());
        }
        for x in g.points().unwrap().iter().step_by(17) {
            let tc = g.tangent_cubic(x).unwrap();
            let through = lines.iter().filter(|l| l.contains(f, x)).count();
            let factors = tc.linear_factors(f).unwrap();
            assert_eq!(factors.is_empty(), through == 0);
            let c = tc.point.coords();
            let at_x = factors
                .iter()
                .filter(|l| crate::projgeom::dot(f, l.coords(), c).is_zero())
                .count();
            assert_eq!(at_x, through);
        }
        let s3 = crate::fixtures::diagonal_f4(false);
        let g3 = s3.geometry(3).unwrap();
        for x in s3.surface_points(1).unwrap() {
            let e = s3.geometry(1).unwrap().embedding_into(&g3).unwrap();
            let tc = g3.tangent_cubic(&x.map(|c| e.apply(c))).unwrap();
            assert_eq!(tc.linear_factors(g3.field()).unwrap().len(), 3);
        }
    }
}
