//! The third-point map on a cubic surface and conic bundles from lines.
//!
//! Given `x` in `S(F_q)` and a line `L` through `x` meeting `S` again in a
//! conjugate pair `s, s'`, the tangent sections `C_s, C_s'` are rational
//! curves. A pair `(a, b)` in `C_s x C_s'` goes to the third point of `S` on
//! the line `ab`; feeding in conjugate parameters gives a map to `S(F_q)`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::cubic::{CubicGeometry, CubicSurface};
use crate::error::{Error, Result};
use crate::ffield::{binary_form_distinct_roots, Fe, FieldCtx, Poly, Solutions};
use crate::lines::{lcm, LineConfiguration};
use crate::projgeom::{dot, enum_points, kernel, HomForm, LineP3, Point3, ProjPoint};

/// Residual intersection of the line `ab` with `S`; `a` again when the line is
/// tangent there.
pub fn third_point(g: &CubicGeometry, a: &Point3, b: &Point3) -> Result<Point3> {
    if !g.on_surface(a) || !g.on_surface(b) {
        return Err(Error::OffSurface);
    }
    if a == b {
        return Err(Error::Invalid("third point of a repeated point".into()));
    }
    let f = g.field();
    // f(s a + t b) = s t (c1 s + c2 t)
    let [_, c1, c2, _] = g.restrict_line(a.coords(), b.coords());
    if c1.is_zero() && c2.is_zero() {
        return Err(Error::LineOnSurface);
    }
    let v: [Fe; 4] =
        std::array::from_fn(|i| f.sub(f.mul(c2, a.coords()[i]), f.mul(c1, b.coords()[i])));
    Ok(ProjPoint::new(f, v).expect("a and b are independent"))
}

/// Parameterization of a plane cubic from a double point: direction `t` is
/// sent to the residual point of the line through the node with that direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodalParam {
    /// Vectors of `P^3` spanning the plane of the curve.
    pub basis: [[Fe; 4]; 3],
    /// The curve in plane coordinates.
    pub form: HomForm,
    pub node: [Fe; 3],
    /// Two standard vectors completing the node to a basis.
    pub dirs: [[Fe; 3]; 2],
}

/// Checks that `node` is a double point of the ternary cubic `form`.
pub fn nodal_param(
    f: &FieldCtx,
    basis: [[Fe; 4]; 3],
    form: HomForm,
    node: [Fe; 3],
) -> Result<NodalParam> {
    if form.nvars() != 3 || form.degree() != 3 {
        return Err(Error::Invalid("expected a ternary cubic".into()));
    }
    let grads = form.partials(f);
    if !form.eval(f, &node).is_zero() || grads.iter().any(|g| !g.eval(f, &node).is_zero()) {
        return Err(Error::Invalid(
            "the point is not singular on the curve".into(),
        ));
    }
    // second-order term at the node, as a quadratic form in the direction
    let mut hess = HomForm::zero(3, 2);
    for (i, g) in grads.iter().enumerate() {
        hess = hess.add(f, &g.scale(f, node[i]));
    }
    if hess.is_zero() {
        return Err(Error::DegenerateCurve);
    }
    let k = node
        .iter()
        .position(|c| !c.is_zero())
        .ok_or_else(|| Error::Invalid("zero node".into()))?;
    let others: Vec<usize> = (0..3).filter(|&i| i != k).collect();
    let dirs = [0, 1].map(|j| {
        let mut e = [Fe::ZERO; 3];
        e[others[j]] = Fe::ONE;
        e
    });
    let p = NodalParam {
        basis,
        form,
        node,
        dirs,
    };
    for (t0, t1) in crate::projgeom::p1_points(f) {
        if p.eval_plane(f, (t0, t1)).is_none() {
            return Err(Error::DegenerateCurve);
        }
    }
    Ok(p)
}

impl NodalParam {
    /// The point in plane coordinates, before lifting to `P^3`.
    pub fn eval_plane(&self, f: &FieldCtx, t: (Fe, Fe)) -> Option<[Fe; 3]> {
        let d: [Fe; 3] = std::array::from_fn(|i| {
            f.add(f.mul(t.0, self.dirs[0][i]), f.mul(t.1, self.dirs[1][i]))
        });
        // C(s n + u d) = u^2 (s A + u B)
        let a = dot(
            f,
            &self
                .form
                .partials(f)
                .iter()
                .map(|g| g.eval(f, &d))
                .collect::<Vec<_>>(),
            &self.node,
        );
        let b = self.form.eval(f, &d);
        let v: [Fe; 3] = std::array::from_fn(|i| f.sub(f.mul(b, self.node[i]), f.mul(a, d[i])));
        v.iter().any(|c| !c.is_zero()).then_some(v)
    }

    pub fn eval(&self, f: &FieldCtx, t: (Fe, Fe)) -> Option<Point3> {
        let c = self.eval_plane(f, t)?;
        let v: [Fe; 4] = std::array::from_fn(|j| {
            (0..3).fold(Fe::ZERO, |acc, i| f.add(acc, f.mul(c[i], self.basis[i][j])))
        });
        ProjPoint::new(f, v)
    }

    /// Applies `phi` to every defining coefficient.
    pub fn map(&self, phi: impl Fn(Fe) -> Fe) -> NodalParam {
        NodalParam {
            basis: self.basis.map(|r| r.map(&phi)),
            form: self.form.map_coeffs(&phi),
            node: self.node.map(&phi),
            dirs: self.dirs,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MapValue {
    Point(Point3),
    Indeterminate,
}

/// Everything needed to evaluate the third-point map, over a working field
/// containing `F_{q^2}` and the field of the 27 lines.
#[derive(Clone, Debug)]
pub struct ThirdPointMapData {
    geometry: Arc<CubicGeometry>,
    /// The chosen rational point, in base-field coordinates.
    pub base_point: Point3,
    pub x: Point3,
    pub line: LineP3,
    pub s: Point3,
    pub s_conj: Point3,
    pub p_s: NodalParam,
    pub p_s_conj: NodalParam,
    /// `T_s ∩ T_s'`.
    pub script_l: LineP3,
    /// Points of `S ∩ T_s ∩ T_s'` over the working field.
    pub indeterminacy: Vec<Point3>,
    /// Distinct points of `S ∩ T_s ∩ T_s'` over the closure.
    pub indeterminacy_closure: usize,
    /// Degree of `S ∩ T_s ∩ T_s'` (3 unless the line lies on `S`).
    pub indeterminacy_degree: usize,
}

/// `lcm(2, K, 2m)`, the extension degree used for the map and its fibers.
pub fn working_degree(cfg: &LineConfiguration, m: u32) -> u32 {
    lcm(lcm(2, cfg.splitting_degree), 2 * m)
}

fn conj(g: &CubicGeometry, p: &Point3) -> Point3 {
    p.map(|c| g.frob(c))
}

/// Lines of `P^3(F_q)` through `x`, in canonical order.
fn rational_lines_through(s: &CubicSurface, x: &Point3) -> Result<Vec<LineP3>> {
    let g = s.geometry(1)?;
    let f = g.field();
    let mut set = HashSet::new();
    for y in enum_points::<4>(f)? {
        if y != *x {
            set.insert(LineP3::through(f, x, &y)?);
        }
    }
    let mut v: Vec<LineP3> = set.into_iter().collect();
    v.sort_by_key(|l| l.lex_key(f));
    Ok(v)
}

/// The first line through `x` (over `F_q`) meeting `S` in a conjugate pair off
/// the 27 lines, with the map data over `F_{q^W}`, `W = working_degree(cfg, m)`.
pub fn find_kollar_line(
    s: &CubicSurface,
    cfg: &LineConfiguration,
    x: &Point3,
    m: u32,
) -> Result<ThirdPointMapData> {
    let small = s.geometry(1)?;
    if !small.on_surface(x) {
        return Err(Error::OffSurface);
    }
    let w = working_degree(cfg, m);
    if !s.fits(w) {
        return Err(Error::FieldCap {
            size: s.q().saturating_pow(w),
            cap: s.cap(),
        });
    }
    let g = s.geometry(w)?;
    let f = g.field();
    let e = small.embedding_into(&g)?;
    let lines = cfg.lines_in(&g)?;
    let on_lines = |p: &Point3| lines.iter().any(|l| l.contains(f, p));
    let sf = small.field();
    for line in rational_lines_through(s, x)? {
        let b = *line
            .rows()
            .iter()
            .find(|r| LineP3::from_rows(sf, *x.coords(), **r).is_some())
            .unwrap();
        // f(s x + t b) = t (c1 s^2 + c2 s t + c3 t^2)
        let [_, c1, c2, c3] = small.restrict_line(x.coords(), &b);
        if c1.is_zero() {
            continue;
        }
        match sf.solve_quadratic(c1, c2, c3) {
            Solutions::Finite(r) if r.is_empty() => {}
            _ => continue,
        }
        let xe = x.map(|c| e.apply(c));
        let be = b.map(|c| e.apply(c));
        let Solutions::Finite(roots) = f.solve_quadratic(e.apply(c1), e.apply(c2), e.apply(c3))
        else {
            unreachable!("c1 is nonzero")
        };
        let mut pts: Vec<Point3> = roots
            .iter()
            .map(|&u| {
                ProjPoint::new(
                    f,
                    std::array::from_fn(|i| f.add(f.mul(u, xe.coords()[i]), be[i])),
                )
                .unwrap()
            })
            .collect();
        pts.sort_by_key(|p| p.lex_key(f));
        if pts.len() != 2 || pts.iter().any(&on_lines) {
            continue;
        }
        let (sp, sc) = (pts[0], pts[1]);
        if conj(&g, &sp) != sc {
            return Err(Error::Configuration(
                "residual points are not conjugate".into(),
            ));
        }
        let tc = g.tangent_cubic(&sp)?;
        let p_s = nodal_param(f, tc.basis, tc.form, *tc.point.coords())?;
        let p_s_conj = p_s.map(|c| g.frob(c));
        let duals = [g.gradient(sp.coords()), g.gradient(sc.coords())];
        let k = kernel(f, &[duals[0].to_vec(), duals[1].to_vec()], 4);
        if k.len() != 2 {
            return Err(Error::Configuration(
                "conjugate tangent planes coincide".into(),
            ));
        }
        let script_l = LineP3::from_rows(
            f,
            std::array::from_fn(|i| k[0][i]),
            std::array::from_fn(|i| k[1][i]),
        )
        .unwrap();
        let [ra, rb] = *script_l.rows();
        let c = g.restrict_line(&ra, &rb);
        // ascending in s for f(s ra + t rb)
        let asc = [c[3], c[2], c[1], c[0]];
        let indeterminacy_degree = if c.iter().all(|x| x.is_zero()) { 0 } else { 3 };
        let indeterminacy_closure = binary_form_distinct_roots(f, &asc);
        let mut indeterminacy: Vec<Point3> = Vec::new();
        if let Solutions::Finite(r) = f.solve_cubic(c[0], c[1], c[2], c[3]) {
            for u in r {
                indeterminacy.push(script_l.point_at(f, u, Fe::ONE));
            }
        }
        if c[0].is_zero() {
            indeterminacy.push(script_l.point_at(f, Fe::ONE, Fe::ZERO));
        }
        indeterminacy.sort_by_key(|p| p.lex_key(f));
        indeterminacy.dedup();
        return Ok(ThirdPointMapData {
            geometry: g.clone(),
            base_point: *x,
            x: xe,
            line: line.map(|c| e.apply(c)),
            s: sp,
            s_conj: sc,
            p_s,
            p_s_conj,
            script_l,
            indeterminacy,
            indeterminacy_closure,
            indeterminacy_degree,
        });
    }
    Err(Error::NoAdmissibleLine)
}

impl ThirdPointMapData {
    pub fn geometry(&self) -> &Arc<CubicGeometry> {
        &self.geometry
    }

    pub fn phi_bar(&self, u: (Fe, Fe), v: (Fe, Fe)) -> MapValue {
        let f = self.geometry.field();
        let (Some(a), Some(b)) = (self.p_s.eval(f, u), self.p_s_conj.eval(f, v)) else {
            return MapValue::Indeterminate;
        };
        if a == b {
            return MapValue::Indeterminate;
        }
        match third_point(&self.geometry, &a, &b) {
            Ok(p) => MapValue::Point(p),
            Err(_) => MapValue::Indeterminate,
        }
    }

    /// `phi_bar(u, u^q)`.
    pub fn phi(&self, u: (Fe, Fe)) -> MapValue {
        let g = &self.geometry;
        self.phi_bar(u, (g.frob(u.0), g.frob(u.1)))
    }

    /// `P^1(F_{q^d})` inside the working field: `(1 : t)` then `(0 : 1)`.
    pub fn parameters(&self, d: u32) -> Result<Vec<(Fe, Fe)>> {
        let g = &self.geometry;
        let mut v: Vec<(Fe, Fe)> = g
            .field()
            .subfield_elements(g.r() * d)?
            .into_iter()
            .map(|t| (Fe::ONE, t))
            .collect();
        v.push((Fe::ZERO, Fe::ONE));
        Ok(v)
    }

    /// `phi` on all of `P^1(F_{q^2})`.
    pub fn phi_values(&self) -> Result<Vec<MapValue>> {
        Ok(self
            .parameters(2)?
            .into_iter()
            .map(|u| self.phi(u))
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub m: u32,
    /// Size of the parameter field `F_{(q^2)^m}`.
    pub field_size: u64,
    pub pairs: usize,
    pub indeterminate: usize,
    pub determinate: usize,
    pub image_points: usize,
    /// Fiber size to number of image points with that fiber size.
    pub histogram: BTreeMap<usize, usize>,
    /// Most frequent fiber size, the smaller one on ties.
    pub modal: usize,
    pub max_fiber: usize,
}

/// Fibers of `phi_bar` over all parameter pairs in `P^1(F_{(q^2)^m})`.
pub fn fiber_analysis(data: &ThirdPointMapData, m: u32) -> Result<FiberReport> {
    let g = data.geometry();
    if !g.k().is_multiple_of(2 * m) {
        return Err(Error::Invalid(format!(
            "the working field does not contain F_(q^2)^{m}"
        )));
    }
    let params = data.parameters(2 * m)?;
    let partial: Vec<(HashMap<Point3, usize>, usize)> = params
        .par_iter()
        .map(|&u| {
            let mut counts = HashMap::new();
            let mut bad = 0;
            for &v in &params {
                match data.phi_bar(u, v) {
                    MapValue::Point(p) => *counts.entry(p).or_insert(0) += 1,
                    MapValue::Indeterminate => bad += 1,
                }
            }
            (counts, bad)
        })
        .collect();
    let mut counts: HashMap<Point3, usize> = HashMap::new();
    let mut indeterminate = 0;
    for (c, b) in partial {
        indeterminate += b;
        for (p, n) in c {
            *counts.entry(p).or_insert(0) += n;
        }
    }
    let mut histogram = BTreeMap::new();
    for &n in counts.values() {
        *histogram.entry(n).or_insert(0) += 1;
    }
    let modal = histogram
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .map(|(&k, _)| k)
        .unwrap_or(0);
    let pairs = params.len() * params.len();
    Ok(FiberReport {
        m,
        field_size: (params.len() - 1) as u64,
        pairs,
        indeterminate,
        determinate: pairs - indeterminate,
        image_points: counts.len(),
        max_fiber: histogram.keys().copied().max().unwrap_or(0),
        histogram,
        modal,
    })
}

/// Preimage count of a single target point over the algebraic closure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ClosureFiber {
    Finite(usize),
    /// A whole curve of parameter pairs maps to the point.
    Curve,
    /// The point lies on `T_s` or `T_s'`, where the count below does not apply.
    Tangent,
}

fn eval_form_polys(f: &FieldCtx, form: &HomForm, x: &[Poly]) -> Poly {
    let mut out = Poly::new(Vec::new());
    for (e, c) in form.terms() {
        let mut t = Poly::new(vec![c]);
        for (i, &k) in e.iter().enumerate() {
            for _ in 0..k {
                t = t.mul(f, &x[i]);
            }
        }
        out = out.add(f, &t);
    }
    out
}

fn pad(p: &Poly, n: usize) -> Vec<Fe> {
    let mut v = p.coeffs().to_vec();
    v.resize(n + 1, Fe::ZERO);
    v
}

/// Number of pairs `(u, v)` over the closure with `phi_bar(u, v) = y`.
///
/// For `a = p_s(u)` the line `y a` meets `T_s'` in `r(u)`; the pair is a
/// preimage exactly when `r(u)` lies on `C_s'` and `a` is off `T_s'`. Both
/// conditions are binary forms in `u` (of degrees 9 and 3), so the count is the
/// number of distinct roots of the first that are not roots of the second.
pub fn closure_fiber(data: &ThirdPointMapData, y: &Point3) -> ClosureFiber {
    let g = data.geometry();
    let f = g.field();
    let h = g.gradient(data.s_conj.coords());
    let h0 = g.gradient(data.s.coords());
    let hy = dot(f, &h, y.coords());
    if hy.is_zero() || dot(f, &h0, y.coords()).is_zero() {
        return ClosureFiber::Tangent;
    }
    let p = &data.p_s;
    // direction d(u) = dirs[0] + u dirs[1]
    let d: Vec<Poly> = (0..3)
        .map(|i| Poly::new(vec![p.dirs[0][i], p.dirs[1][i]]))
        .collect();
    let b = eval_form_polys(f, &p.form, &d);
    let a = p
        .form
        .partials(f)
        .iter()
        .zip(p.node)
        .fold(Poly::new(Vec::new()), |acc, (gr, n)| {
            acc.add(f, &eval_form_polys(f, gr, &d).scale(f, n))
        });
    let plane: Vec<Poly> = (0..3)
        .map(|i| {
            b.scale(f, p.node[i])
                .add(f, &a.mul(f, &d[i]).scale(f, f.neg(Fe::ONE)))
        })
        .collect();
    let pt: Vec<Poly> = (0..4)
        .map(|j| {
            (0..3).fold(Poly::new(Vec::new()), |acc, i| {
                acc.add(f, &plane[i].scale(f, p.basis[i][j]))
            })
        })
        .collect();
    let hp = (0..4).fold(Poly::new(Vec::new()), |acc, j| {
        acc.add(f, &pt[j].scale(f, h[j]))
    });
    let r: Vec<Poly> = (0..4)
        .map(|j| {
            hp.scale(f, y.coords()[j])
                .add(f, &pt[j].scale(f, f.neg(hy)))
        })
        .collect();
    let big = eval_form_polys(f, g.form(), &r);
    if big.is_zero() {
        return ClosureFiber::Curve;
    }
    let all = binary_form_distinct_roots(f, &pad(&big, 9));
    let common = big.gcd(f, &hp).degree().unwrap_or(0);
    let inf_common =
        usize::from(big.degree().unwrap_or(0) < 9 && hp.degree().is_none_or(|d| d < 3));
    ClosureFiber::Finite(all - common - inf_common)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureCensus {
    /// Extension degree (over `F_q`) of the target points.
    pub degree: u32,
    pub points: usize,
    pub tangent: usize,
    pub curves: usize,
    pub histogram: BTreeMap<usize, usize>,
    pub modal: usize,
}

/// `closure_fiber` over every point of `S(F_{q^d})`.
pub fn closure_census(data: &ThirdPointMapData, d: u32) -> Result<ClosureCensus> {
    let g = data.geometry();
    if !g.k().is_multiple_of(d) {
        return Err(Error::Invalid(format!(
            "{d} does not divide the working degree"
        )));
    }
    let pts: Vec<Point3> = g
        .points()?
        .into_iter()
        .filter(|p| p.in_subfield(g.field(), g.r() * d))
        .collect();
    let fibers: Vec<ClosureFiber> = pts.par_iter().map(|y| closure_fiber(data, y)).collect();
    let mut histogram = BTreeMap::new();
    let (mut tangent, mut curves) = (0, 0);
    for c in fibers {
        match c {
            ClosureFiber::Finite(n) => *histogram.entry(n).or_insert(0) += 1,
            ClosureFiber::Curve => curves += 1,
            ClosureFiber::Tangent => tangent += 1,
        }
    }
    let modal = histogram
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .map(|(&k, _)| k)
        .unwrap_or(0);
    Ok(ClosureCensus {
        degree: d,
        points: pts.len(),
        tangent,
        curves,
        histogram,
        modal,
    })
}

/// One plane of the pencil through the axis: the residual conic
/// `a y0^2 + b y1^2 + c w^2 + d y0 y1 + e y0 w + f y1 w`.
#[derive(Clone, Debug)]
pub struct ConicFiber {
    pub param: (Fe, Fe),
    pub conic: [Fe; 6],
    pub singular: bool,
}

#[derive(Clone, Debug)]
pub struct ConicBundle {
    pub axis: LineP3,
    /// `c1, c2` with the plane at `(l : m)` spanned by the axis and `l c1 + m c2`.
    pub complement: [[Fe; 4]; 2],
    pub fibers: Vec<ConicFiber>,
    /// Ascending coefficients in `l` of the binary quintic whose roots are the singular fibers.
    pub discriminant: Vec<Fe>,
    pub singular_over_closure: usize,
}

/// Coefficients, ascending in `l`, of the residual conic entries as binary forms.
fn conic_coefficient_forms(g: &CubicGeometry, axis: &LineP3, comp: &[[Fe; 4]; 2]) -> [Vec<Fe>; 6] {
    let f = g.field();
    let [a, b] = *axis.rows();
    let sub = g.form().substitute(f, &[&a, &b, &comp[0], &comp[1]]);
    // monomials y0^i y1^j z1^k z2^l; z1 = l w, z2 = m w, and w divides out once
    let slot = |i: u8, j: u8| -> usize {
        match (i, j) {
            (2, 0) => 0,
            (0, 2) => 1,
            (0, 0) => 2,
            (1, 1) => 3,
            (1, 0) => 4,
            (0, 1) => 5,
            _ => usize::MAX,
        }
    };
    let degs = [1, 1, 3, 1, 2, 2];
    let mut out: [Vec<Fe>; 6] = degs.map(|d| vec![Fe::ZERO; d + 1]);
    for (e, c) in sub.terms() {
        let (i, j, k, l) = (e[0], e[1], e[2], e[3]);
        if k + l == 0 {
            continue;
        }
        let s = slot(i, j);
        let entry = &mut out[s][k as usize];
        *entry = f.add(*entry, c);
    }
    out
}

fn form_mul(f: &FieldCtx, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    let mut out = vec![Fe::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    out
}

fn form_lin(f: &FieldCtx, terms: &[(i64, Vec<Fe>)]) -> Vec<Fe> {
    let n = terms[0].1.len();
    let mut out = vec![Fe::ZERO; n];
    for (c, v) in terms {
        for i in 0..n {
            out[i] = f.add(out[i], f.mul(f.from_int(*c), v[i]));
        }
    }
    out
}

fn eval_binary(f: &FieldCtx, coeffs: &[Fe], t: (Fe, Fe)) -> Fe {
    let n = coeffs.len() - 1;
    coeffs.iter().enumerate().fold(Fe::ZERO, |acc, (i, &c)| {
        f.add(
            acc,
            f.mul(c, f.mul(f.pow(t.0, i as u64), f.pow(t.1, (n - i) as u64))),
        )
    })
}

/// Rank drop of a ternary quadric, found from a common zero of the partials.
pub fn conic_is_singular(f: &FieldCtx, q: &[Fe; 6]) -> bool {
    let [a, b, c, d, e, g] = *q;
    let two = f.from_int(2);
    let rows = vec![
        vec![f.mul(two, a), d, e],
        vec![d, f.mul(two, b), g],
        vec![e, g, f.mul(two, c)],
    ];
    let k = kernel(f, &rows, 3);
    if k.len() != 1 {
        return !k.is_empty();
    }
    let v = &k[0];
    let val = [
        f.mul(a, f.mul(v[0], v[0])),
        f.mul(b, f.mul(v[1], v[1])),
        f.mul(c, f.mul(v[2], v[2])),
        f.mul(d, f.mul(v[0], v[1])),
        f.mul(e, f.mul(v[0], v[2])),
        f.mul(g, f.mul(v[1], v[2])),
    ];
    val.iter().fold(Fe::ZERO, |acc, &x| f.add(acc, x)).is_zero()
}

/// The pencil of planes through a line of `S`, over the field of `g`.
pub fn conic_bundle(g: &CubicGeometry, axis: &LineP3) -> Result<ConicBundle> {
    let f = g.field();
    let [a, b] = *axis.rows();
    if !g.form().restrict_line(f, &a, &b).is_zero() {
        return Err(Error::Invalid("the axis is not on the surface".into()));
    }
    let mut comp = Vec::new();
    let mut span = vec![a.to_vec(), b.to_vec()];
    for i in 0..4 {
        let mut e = [Fe::ZERO; 4];
        e[i] = Fe::ONE;
        let mut trial = span.clone();
        trial.push(e.to_vec());
        if crate::projgeom::rank(f, &mut trial.clone()) == span.len() + 1 {
            span = trial;
            comp.push(e);
        }
    }
    let complement = [comp[0], comp[1]];
    let forms = conic_coefficient_forms(g, axis, &complement);
    let [ca, cb, cc, cd, ce, cf] = &forms;
    // 4abc + def - a f^2 - b e^2 - c d^2
    let abc = form_mul(f, &form_mul(f, ca, cb), cc);
    let def = form_mul(f, &form_mul(f, cd, ce), cf);
    let aff = form_mul(f, ca, &form_mul(f, cf, cf));
    let bee = form_mul(f, cb, &form_mul(f, ce, ce));
    let cdd = form_mul(f, cc, &form_mul(f, cd, cd));
    let discriminant = form_lin(f, &[(4, abc), (1, def), (-1, aff), (-1, bee), (-1, cdd)]);
    if discriminant.iter().all(|c| c.is_zero()) {
        return Err(Error::Singular(
            "every fiber of the bundle is singular".into(),
        ));
    }
    let singular_over_closure = binary_form_distinct_roots(f, &discriminant);
    let fibers = crate::projgeom::p1_points(f)
        .into_iter()
        .map(|t| {
            let conic: [Fe; 6] = std::array::from_fn(|i| eval_binary(f, &forms[i], t));
            ConicFiber {
                param: t,
                singular: conic_is_singular(f, &conic),
                conic,
            }
        })
        .collect();
    Ok(ConicBundle {
        axis: *axis,
        complement,
        fibers,
        discriminant,
        singular_over_closure,
    })
}

impl ConicBundle {
    pub fn singular_fibers(&self) -> impl Iterator<Item = &ConicFiber> {
        self.fibers.iter().filter(|c| c.singular)
    }

    /// The plane point `y0 a + y1 b + w (l c1 + m c2)`.
    pub fn plane_point(&self, f: &FieldCtx, fiber: &ConicFiber, y: [Fe; 3]) -> [Fe; 4] {
        let [a, b] = *self.axis.rows();
        std::array::from_fn(|i| {
            let c = f.add(
                f.mul(fiber.param.0, self.complement[0][i]),
                f.mul(fiber.param.1, self.complement[1][i]),
            );
            f.add(f.add(f.mul(y[0], a[i]), f.mul(y[1], b[i])), f.mul(y[2], c))
        })
    }

    /// Evaluates `discriminant` at a pencil parameter.
    pub fn discriminant_at(&self, f: &FieldCtx, t: (Fe, Fe)) -> Fe {
        eval_binary(f, &self.discriminant, t)
    }
}
