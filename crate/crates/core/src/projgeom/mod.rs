//! Projective points, lines, planes and homogeneous forms over a [`FieldCtx`].

mod form;
mod linalg;

pub use form::{monomials, CompiledForm, HomForm};
pub use linalg::{kernel, rank, rref};

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::ffield::{Fe, FieldCtx};

/// Upper bound on the size of any enumerated projective space.
pub const ENUMERATION_CAP: u64 = 1 << 26;

/// A point of `P^(D-1)`, normalized so that its first nonzero coordinate is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ProjPoint<const D: usize>(pub(crate) [Fe; D]);

pub type Point2 = ProjPoint<3>;
pub type Point3 = ProjPoint<4>;
pub type Point4 = ProjPoint<5>;

impl<const D: usize> ProjPoint<D> {
    /// Canonical representative of the class of `coords`; `None` for the zero vector.
    pub fn new(f: &FieldCtx, coords: [Fe; D]) -> Option<Self> {
        let lead = *coords.iter().find(|c| !c.is_zero())?;
        if lead == Fe::ONE {
            return Some(ProjPoint(coords));
        }
        let inv = f.inv(lead).unwrap();
        Some(ProjPoint(coords.map(|c| f.mul(c, inv))))
    }

    /// Wraps coordinates that are already normalized.
    pub(crate) fn from_normalized(coords: [Fe; D]) -> Self {
        debug_assert!(coords.iter().find(|c| !c.is_zero()) == Some(&Fe::ONE));
        ProjPoint(coords)
    }

    pub fn coords(&self) -> &[Fe; D] {
        &self.0
    }

    /// Coordinate-wise `x -> x^(p^m)`.
    pub fn frobenius(&self, f: &FieldCtx, m: u32) -> Self {
        ProjPoint(self.0.map(|c| f.frob_power(c, m)))
    }

    /// Image under a coordinate-wise field map (an embedding or automorphism).
    pub fn map(&self, phi: impl Fn(Fe) -> Fe) -> Self {
        ProjPoint(self.0.map(phi))
    }

    pub fn lex_key(&self, f: &FieldCtx) -> [u32; D] {
        self.0.map(|c| f.lex_key(c))
    }

    /// True iff every coordinate lies in `F_{p^m}`.
    pub fn in_subfield(&self, f: &FieldCtx, m: u32) -> bool {
        self.0.iter().all(|&c| f.in_subfield(c, m))
    }

    pub fn display(&self, f: &FieldCtx) -> String {
        format_vector(f, &self.0)
    }
}

pub(crate) fn format_vector(f: &FieldCtx, v: &[Fe]) -> String {
    let mut s = String::from("[");
    for (i, &c) in v.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        write!(s, "{}", f.fmt_elem(c)).unwrap();
    }
    s.push(']');
    s
}

pub(crate) fn dot(f: &FieldCtx, a: &[Fe], b: &[Fe]) -> Fe {
    a.iter()
        .zip(b)
        .fold(Fe::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// `s a + t b`, coordinate-wise.
pub(crate) fn combine<const D: usize>(
    f: &FieldCtx,
    s: Fe,
    a: &[Fe; D],
    t: Fe,
    b: &[Fe; D],
) -> [Fe; D] {
    std::array::from_fn(|i| f.add(f.mul(s, a[i]), f.mul(t, b[i])))
}

/// Number of points of `P^dim` over a field of size `q`.
pub fn projective_size(q: u64, dim: u32) -> u64 {
    (0..=dim).map(|i| q.pow(i)).sum()
}

/// All points of `P^(D-1)` over `f`: grouped by the position of the leading 1,
/// then by the raw encodings of the trailing coordinates.
pub fn enum_points<const D: usize>(f: &FieldCtx) -> Result<Vec<ProjPoint<D>>> {
    let q = f.size() as u64;
    let total = projective_size(q, D as u32 - 1);
    if total > ENUMERATION_CAP {
        return Err(Error::EnumerationCap(total));
    }
    let mut out = Vec::with_capacity(total as usize);
    for lead in 0..D {
        let free = D - 1 - lead;
        let count = q.pow(free as u32);
        for idx in 0..count {
            let mut c = [Fe::ZERO; D];
            c[lead] = Fe::ONE;
            let mut v = idx;
            for j in (lead + 1..D).rev() {
                c[j] = Fe((v % q) as u32);
                v /= q;
            }
            out.push(ProjPoint(c));
        }
    }
    Ok(out)
}

/// The `idx`-th point of `P^(D-1)` in [`enum_points`] order.
pub fn point_at_index<const D: usize>(q: u64, mut idx: u64) -> [Fe; D] {
    let mut c = [Fe::ZERO; D];
    for lead in 0..D {
        let count = q.pow((D - 1 - lead) as u32);
        if idx < count {
            c[lead] = Fe::ONE;
            for j in (lead + 1..D).rev() {
                c[j] = Fe((idx % q) as u32);
                idx /= q;
            }
            return c;
        }
        idx -= count;
    }
    panic!("index beyond the projective space");
}

/// Points of `P^1` as normalized pairs: `(1:t)` for every `t`, then `(0:1)`.
pub fn p1_points(f: &FieldCtx) -> Vec<(Fe, Fe)> {
    let mut v: Vec<(Fe, Fe)> = f.elements().map(|t| (Fe::ONE, t)).collect();
    v.push((Fe::ZERO, Fe::ONE));
    v
}

/// A line in `P^(D-1)`, stored as the reduced row echelon form of a 2×D basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ProjLine<const D: usize> {
    rows: [[Fe; D]; 2],
}

pub type LineP3 = ProjLine<4>;
pub type LineP4 = ProjLine<5>;

impl<const D: usize> ProjLine<D> {
    /// Span of two vectors; `None` unless they are independent.
    pub fn from_rows(f: &FieldCtx, a: [Fe; D], b: [Fe; D]) -> Option<Self> {
        let mut m = vec![a.to_vec(), b.to_vec()];
        let pivots = rref(f, &mut m);
        if pivots.len() != 2 {
            return None;
        }
        let rows = [
            std::array::from_fn(|i| m[0][i]),
            std::array::from_fn(|i| m[1][i]),
        ];
        Some(ProjLine { rows })
    }

    pub fn through(f: &FieldCtx, a: &ProjPoint<D>, b: &ProjPoint<D>) -> Result<Self> {
        ProjLine::from_rows(f, a.0, b.0)
            .ok_or_else(|| Error::Invalid("line through equal points".into()))
    }

    pub fn rows(&self) -> &[[Fe; D]; 2] {
        &self.rows
    }

    /// The point `s row_0 + t row_1`.
    pub fn point_at(&self, f: &FieldCtx, s: Fe, t: Fe) -> ProjPoint<D> {
        ProjPoint::new(f, combine(f, s, &self.rows[0], t, &self.rows[1]))
            .expect("nonzero parameter")
    }

    /// The `q + 1` rational points, in [`p1_points`] parameter order.
    pub fn points(&self, f: &FieldCtx) -> Vec<ProjPoint<D>> {
        p1_points(f)
            .into_iter()
            .map(|(s, t)| self.point_at(f, s, t))
            .collect()
    }

    /// A basis of the linear forms vanishing on the line.
    pub fn equations(&self, f: &FieldCtx) -> Vec<Vec<Fe>> {
        kernel(f, &[self.rows[0].to_vec(), self.rows[1].to_vec()], D)
    }

    pub fn contains(&self, f: &FieldCtx, p: &ProjPoint<D>) -> bool {
        let mut m = vec![self.rows[0].to_vec(), self.rows[1].to_vec(), p.0.to_vec()];
        rank(f, &mut m) == 2
    }

    /// True iff the two distinct lines share a point.
    pub fn meets(&self, f: &FieldCtx, other: &Self) -> bool {
        let mut m = vec![
            self.rows[0].to_vec(),
            self.rows[1].to_vec(),
            other.rows[0].to_vec(),
            other.rows[1].to_vec(),
        ];
        rank(f, &mut m) <= 3
    }

    /// The common point of two distinct meeting lines.
    pub fn intersection(&self, f: &FieldCtx, other: &Self) -> Option<ProjPoint<D>> {
        if self == other {
            return None;
        }
        for h in other.equations(f) {
            let a = dot(f, &h, &self.rows[0]);
            let b = dot(f, &h, &self.rows[1]);
            if a.is_zero() && b.is_zero() {
                continue;
            }
            let p = self.point_at(f, b, f.neg(a));
            return other.contains(f, &p).then_some(p);
        }
        None
    }

    pub fn frobenius(&self, f: &FieldCtx, m: u32) -> Self {
        // a field automorphism maps an RREF matrix to an RREF matrix
        ProjLine {
            rows: self.rows.map(|r| r.map(|c| f.frob_power(c, m))),
        }
    }

    /// Image under a coordinate-wise field embedding.
    pub fn map(&self, phi: impl Fn(Fe) -> Fe) -> Self {
        ProjLine {
            rows: self.rows.map(|r| r.map(&phi)),
        }
    }

    /// Lexicographic key of the RREF entries, row by row.
    pub fn lex_key(&self, f: &FieldCtx) -> Vec<u32> {
        self.rows
            .iter()
            .flat_map(|r| r.iter().map(|&c| f.lex_key(c)))
            .collect()
    }

    /// True iff every RREF entry lies in `F_{p^m}`.
    pub fn in_subfield(&self, f: &FieldCtx, m: u32) -> bool {
        self.rows.iter().flatten().all(|&c| f.in_subfield(c, m))
    }

    pub fn display(&self, f: &FieldCtx) -> String {
        format!(
            "{}{}",
            format_vector(f, &self.rows[0]),
            format_vector(f, &self.rows[1])
        )
    }
}

/// A plane in `P^3`, given by its normalized dual vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PlaneP3 {
    dual: [Fe; 4],
}

impl PlaneP3 {
    pub fn new(f: &FieldCtx, dual: [Fe; 4]) -> Option<Self> {
        ProjPoint::new(f, dual).map(|p| PlaneP3 { dual: p.0 })
    }

    pub fn dual(&self) -> &[Fe; 4] {
        &self.dual
    }

    pub fn contains(&self, f: &FieldCtx, p: &Point3) -> bool {
        dot(f, &self.dual, &p.0).is_zero()
    }

    /// Three vectors spanning the plane: the RREF basis of the kernel of the dual vector.
    pub fn basis(&self, f: &FieldCtx) -> [[Fe; 4]; 3] {
        let mut k = kernel(f, &[self.dual.to_vec()], 4);
        rref(f, &mut k);
        std::array::from_fn(|i| std::array::from_fn(|j| k[i][j]))
    }

    /// Plane coordinates of a point of the plane with respect to [`PlaneP3::basis`].
    pub fn coordinates(&self, f: &FieldCtx, p: &Point3) -> Option<Point2> {
        let basis = self.basis(f);
        // the basis is in RREF, so its pivot entries read off the coordinates
        let mut c = [Fe::ZERO; 3];
        for (i, row) in basis.iter().enumerate() {
            let piv = row.iter().position(|x| !x.is_zero()).unwrap();
            c[i] = p.0[piv];
        }
        let back: [Fe; 4] = std::array::from_fn(|j| {
            (0..3).fold(Fe::ZERO, |acc, i| f.add(acc, f.mul(c[i], basis[i][j])))
        });
        (back == p.0).then(|| ProjPoint::new(f, c)).flatten()
    }

    /// The point of `P^3` with the given plane coordinates.
    pub fn lift(&self, f: &FieldCtx, c: &[Fe; 3]) -> Option<Point3> {
        let basis = self.basis(f);
        let v: [Fe; 4] = std::array::from_fn(|j| {
            (0..3).fold(Fe::ZERO, |acc, i| f.add(acc, f.mul(c[i], basis[i][j])))
        });
        ProjPoint::new(f, v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn pt(f: &FieldCtx, v: [i64; 4]) -> Point3 {
        ProjPoint::new(f, v.map(|x| f.from_int(x))).unwrap()
    }

    #[test]
    fn enumeration_counts() {
        for (p, n) in [(2, 1), (2, 2), (3, 1), (5, 1), (2, 3)] {
            let f = FieldCtx::new(p, n).unwrap();
            let q = f.size() as usize;
            assert_eq!(enum_points::<2>(&f).unwrap().len(), q + 1);
            assert_eq!(enum_points::<3>(&f).unwrap().len(), q * q + q + 1);
            let pts = enum_points::<4>(&f).unwrap();
            assert_eq!(pts.len() as u64, projective_size(q as u64, 3));
            for (i, x) in pts.iter().enumerate() {
                assert_eq!(point_at_index::<4>(q as u64, i as u64), x.0);
            }
            let set: std::collections::HashSet<_> = pts.iter().collect();
            assert_eq!(set.len(), pts.len());
            for x in &pts {
                assert_eq!(ProjPoint::new(&f, x.0).unwrap(), *x);
            }
        }
        let f2 = FieldCtx::new(2, 1).unwrap();
        assert_eq!(enum_points::<4>(&f2).unwrap().len(), 15);
        let f4 = FieldCtx::new(2, 2).unwrap();
        assert_eq!(enum_points::<3>(&f4).unwrap().len(), 21);
        let f4096 = FieldCtx::new(2, 12).unwrap();
        assert!(matches!(
            enum_points::<4>(&f4096),
            Err(Error::EnumerationCap(_))
        ));
    }

    #[test]
    fn lines_through_points() {
        let f = FieldCtx::new(2, 1).unwrap();
        let l = LineP3::through(&f, &pt(&f, [1, 0, 0, 0]), &pt(&f, [0, 1, 0, 0])).unwrap();
        let pts = l.points(&f);
        assert_eq!(pts.len(), 3);
        let want = [
            pt(&f, [1, 0, 0, 0]),
            pt(&f, [0, 1, 0, 0]),
            pt(&f, [1, 1, 0, 0]),
        ];
        for w in &want {
            assert!(pts.contains(w));
        }
        let eqs = l.equations(&f);
        assert_eq!(eqs.len(), 2);
        for p in &pts {
            for h in &eqs {
                assert!(dot(&f, h, &p.0).is_zero());
            }
        }
        assert!(LineP3::through(&f, &want[0], &want[0]).is_err());

        let f8 = FieldCtx::new(2, 3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let all = enum_points::<4>(&f8).unwrap();
        for _ in 0..100 {
            let a = all[rng.gen_range(0..all.len())];
            let b = all[rng.gen_range(0..all.len())];
            if a == b {
                continue;
            }
            let l1 = LineP3::through(&f8, &a, &b).unwrap();
            assert_eq!(l1, LineP3::through(&f8, &b, &a).unwrap());
            assert_eq!(l1.points(&f8).len(), 9);
            assert!(l1.contains(&f8, &a) && l1.contains(&f8, &b));
        }
    }

    #[test]
    fn incidence_of_coordinate_lines() {
        let f = FieldCtx::new(3, 1).unwrap();
        let e = |i: usize| {
            let mut v = [0; 4];
            v[i] = 1;
            pt(&f, v)
        };
        let a = LineP3::through(&f, &e(0), &e(1)).unwrap();
        let b = LineP3::through(&f, &e(2), &e(3)).unwrap();
        let c = LineP3::through(&f, &e(0), &e(2)).unwrap();
        assert!(!a.meets(&f, &b));
        assert!(a.meets(&f, &c));
        assert_eq!(a.intersection(&f, &c), Some(e(0)));
        assert_eq!(a.intersection(&f, &b), None);
    }

    #[test]
    fn plane_basis_and_coordinates() {
        let f = FieldCtx::new(5, 1).unwrap();
        let h = PlaneP3::new(&f, [f.from_int(2), f.from_int(2), Fe::ZERO, Fe::ZERO]).unwrap();
        assert_eq!(h.dual(), &[Fe::ONE, Fe::ONE, Fe::ZERO, Fe::ZERO]);
        for row in h.basis(&f) {
            assert!(dot(&f, h.dual(), &row).is_zero());
        }
        for p in enum_points::<4>(&f).unwrap() {
            match h.coordinates(&f, &p) {
                Some(c) => {
                    assert!(h.contains(&f, &p));
                    assert_eq!(h.lift(&f, c.coords()).unwrap(), p);
                }
                None => assert!(!h.contains(&f, &p)),
            }
        }
    }
}
