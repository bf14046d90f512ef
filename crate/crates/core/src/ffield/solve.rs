//! Closed-form root extraction for polynomials of degree at most three.
//!
//! Every cubic is shifted and scaled onto one of the one-parameter families
//! `z^3 + nu z + c` (one family per square class of `nu`), whose roots are
//! tabulated once per field. Point enumeration calls these solvers once per
//! chart point, so they must be O(1). [`FieldCtx::roots`] is the exhaustive
//! reference they are tested against.

use arrayvec::ArrayVec;

use super::{Fe, FieldCtx, NONE};

/// Root set of a univariate polynomial of degree at most three.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solutions {
    /// The polynomial is identically zero.
    Every,
    /// Distinct roots in the field.
    Finite(ArrayVec<Fe, 3>),
}

impl Solutions {
    fn none() -> Solutions {
        Solutions::Finite(ArrayVec::new())
    }

    fn push(&mut self, x: Fe) {
        if let Solutions::Finite(v) = self {
            if !v.contains(&x) {
                v.push(x);
            }
        }
    }

    /// Roots as a vector, expanding `Every` to the whole field.
    pub fn to_vec(&self, f: &FieldCtx) -> Vec<Fe> {
        match self {
            Solutions::Every => f.elements().collect(),
            Solutions::Finite(v) => v.to_vec(),
        }
    }
}

#[derive(Debug, Default)]
pub(super) struct RootTables {
    /// Nonsquare used for the second family; `ONE` in characteristic two.
    nu: [Fe; 2],
    /// `depressed[k][c]` lists the roots of `z^3 + nu_k z + c`.
    depressed: [Vec<[u32; 3]>; 2],
    counts: [Vec<u8>; 2],
    /// Characteristic two: a root of `y^2 + y = z`, or `NONE`.
    artin_schreier: Vec<u32>,
}

impl RootTables {
    pub(super) fn build(f: &FieldCtx) -> RootTables {
        let size = f.size() as usize;
        let nonsquare = if f.p() == 2 {
            Fe::ONE
        } else {
            f.elements().find(|&x| !f.is_square(x)).unwrap()
        };
        let nu = [Fe::ONE, nonsquare];
        let families = if f.p() == 2 { 1 } else { 2 };
        let mut depressed = [Vec::new(), Vec::new()];
        let mut counts = [Vec::new(), Vec::new()];
        for k in 0..families {
            let mut roots = vec![[NONE; 3]; size];
            let mut cnt = vec![0u8; size];
            for z in f.elements() {
                let z3 = f.mul(f.mul(z, z), z);
                let c = f.neg(f.add(z3, f.mul(nu[k], z)));
                let slot = &mut cnt[c.0 as usize];
                roots[c.0 as usize][*slot as usize] = z.0;
                *slot += 1;
            }
            depressed[k] = roots;
            counts[k] = cnt;
        }
        let mut artin_schreier = Vec::new();
        if f.p() == 2 {
            artin_schreier = vec![NONE; size];
            for y in f.elements() {
                let z = f.add(f.mul(y, y), y);
                if artin_schreier[z.0 as usize] == NONE {
                    artin_schreier[z.0 as usize] = y.0;
                }
            }
        }
        RootTables {
            nu,
            depressed,
            counts,
            artin_schreier,
        }
    }
}

impl FieldCtx {
    /// Distinct roots of `a x^2 + b x + c`.
    pub fn solve_quadratic(&self, a: Fe, b: Fe, c: Fe) -> Solutions {
        if a.is_zero() {
            if b.is_zero() {
                return if c.is_zero() {
                    Solutions::Every
                } else {
                    Solutions::none()
                };
            }
            let mut s = Solutions::none();
            s.push(self.neg(self.div(c, b).unwrap()));
            return s;
        }
        let ia = self.inv(a).unwrap();
        let (b, c) = (self.mul(b, ia), self.mul(c, ia));
        let mut s = Solutions::none();
        if self.p() == 2 {
            if b.is_zero() {
                s.push(self.sqrt(c).unwrap());
                return s;
            }
            // x = b y, y^2 + y = c / b^2
            let z = self.div(c, self.mul(b, b)).unwrap();
            let y = self.tables.artin_schreier[z.0 as usize];
            if y != NONE {
                let y = Fe(y);
                s.push(self.mul(b, y));
                s.push(self.mul(b, self.add(y, Fe::ONE)));
            }
            return s;
        }
        let two = self.from_int(2);
        let four = self.from_int(4);
        let disc = self.sub(self.mul(b, b), self.mul(four, c));
        if let Some(r) = self.sqrt(disc) {
            let inv2 = self.inv(two).unwrap();
            let mb = self.neg(b);
            s.push(self.mul(self.add(mb, r), inv2));
            s.push(self.mul(self.sub(mb, r), inv2));
        }
        s
    }

    /// Distinct roots of `a3 x^3 + a2 x^2 + a1 x + a0`.
    pub fn solve_cubic(&self, a3: Fe, a2: Fe, a1: Fe, a0: Fe) -> Solutions {
        if a3.is_zero() {
            return self.solve_quadratic(a2, a1, a0);
        }
        let ia = self.inv(a3).unwrap();
        let (a, b, c) = (self.mul(a2, ia), self.mul(a1, ia), self.mul(a0, ia));
        if c.is_zero() {
            let mut s = self.solve_quadratic(Fe::ONE, a, b);
            s.push(Fe::ZERO);
            return s;
        }
        if self.p() != 3 {
            // x = y + t with t = -a/3
            let three = self.from_int(3);
            let t = self.neg(self.div(a, three).unwrap());
            let t2 = self.mul(t, t);
            let p_coef = self.add(
                self.add(
                    self.mul(three, t2),
                    self.mul(self.mul(self.from_int(2), a), t),
                ),
                b,
            );
            let q_coef = self.add(
                self.add(self.mul(t2, t), self.mul(a, t2)),
                self.add(self.mul(b, t), c),
            );
            let mut s = Solutions::none();
            for y in self.depressed_roots(p_coef, q_coef) {
                s.push(self.add(y, t));
            }
            return s;
        }
        // characteristic three
        if a.is_zero() {
            let mut s = Solutions::none();
            for x in self.depressed_roots(b, c) {
                s.push(x);
            }
            return s;
        }
        // x = y + b/a removes the linear term: y^3 + a y^2 + c'
        let t = self.div(b, a).unwrap();
        let t2 = self.mul(t, t);
        let c2 = self.add(
            self.add(self.mul(t2, t), self.mul(a, t2)),
            self.add(self.mul(b, t), c),
        );
        let mut s = Solutions::none();
        if c2.is_zero() {
            s.push(t);
            s.push(self.sub(t, a));
            return s;
        }
        // y = 1/w: w^3 + (a/c') w + 1/c' = 0
        let ic2 = self.inv(c2).unwrap();
        for w in self.depressed_roots(self.mul(a, ic2), ic2) {
            s.push(self.add(self.inv(w).unwrap(), t));
        }
        s
    }

    /// Roots of `y^3 + p y + c`.
    fn depressed_roots(&self, p: Fe, c: Fe) -> ArrayVec<Fe, 3> {
        let mut out = ArrayVec::new();
        if p.is_zero() {
            if c.is_zero() {
                out.push(Fe::ZERO);
                return out;
            }
            return self.cube_roots(self.neg(c));
        }
        let k = usize::from(!self.is_square(p));
        let nu = self.tables.nu[k];
        // y = l z with l^2 = p / nu
        let l = self.sqrt(self.div(p, nu).unwrap()).unwrap();
        let l3 = self.mul(self.mul(l, l), l);
        let cz = self.div(c, l3).unwrap();
        let n = self.tables.counts[k][cz.0 as usize] as usize;
        for &z in &self.tables.depressed[k][cz.0 as usize][..n] {
            out.push(self.mul(l, Fe(z)));
        }
        out
    }

    fn cube_roots(&self, w: Fe) -> ArrayVec<Fe, 3> {
        let mut out = ArrayVec::new();
        let order = self.size() as u64 - 1;
        let lw = self.log_of(w) as u64;
        let g = gcd(3, order);
        if !lw.is_multiple_of(g) {
            return out;
        }
        let m = order / g;
        let e0 = if m == 1 {
            0
        } else {
            (lw / g) % m * mod_inverse(3 / g, m) % m
        };
        for j in 0..g {
            out.push(self.exp_of(e0 + j * m));
        }
        out
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i64, (a % m) as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    t0.rem_euclid(m as i64) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn brute(f: &FieldCtx, c: [Fe; 4]) -> Solutions {
        if c.iter().all(|x| x.is_zero()) {
            return Solutions::Every;
        }
        let mut v: Vec<Fe> = f
            .roots(&[c[0], c[1], c[2], c[3]])
            .unwrap()
            .into_iter()
            .map(|(x, _)| x)
            .collect();
        v.sort_by_key(|x| x.0);
        Solutions::Finite(v.into_iter().collect())
    }

    fn sorted(s: Solutions) -> Solutions {
        match s {
            Solutions::Every => Solutions::Every,
            Solutions::Finite(mut v) => {
                v.sort_by_key(|x| x.0);
                Solutions::Finite(v)
            }
        }
    }

    #[test]
    fn cubic_solver_matches_exhaustive_scan() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (p, n) in [
            (2, 1),
            (3, 1),
            (5, 1),
            (7, 1),
            (2, 2),
            (2, 3),
            (3, 2),
            (2, 4),
            (5, 2),
            (3, 3),
            (7, 2),
            (2, 6),
            (13, 1),
        ] {
            let f = FieldCtx::new(p, n).unwrap();
            for _ in 0..3000 {
                let mut c = [Fe::ZERO; 4];
                for x in c.iter_mut() {
                    // bias toward zeros so degenerate cases are exercised
                    *x = if rng.gen_bool(0.25) {
                        Fe::ZERO
                    } else {
                        Fe(rng.gen_range(0..f.size()))
                    };
                }
                let fast = sorted(f.solve_cubic(c[3], c[2], c[1], c[0]));
                assert_eq!(fast, brute(&f, c), "F_{p}^{n}: {c:?}");
            }
        }
    }

    #[test]
    fn all_monic_cubics_over_small_fields() {
        for (p, n) in [(2, 2), (3, 1), (3, 2), (5, 1)] {
            let f = FieldCtx::new(p, n).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    for c in f.elements() {
                        let coeffs = [c, b, a, Fe::ONE];
                        assert_eq!(sorted(f.solve_cubic(Fe::ONE, a, b, c)), brute(&f, coeffs));
                    }
                }
            }
        }
    }
}
