use super::{Fe, FieldCtx};

/// Dense univariate polynomial, ascending coefficients, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<Fe>);

impl Poly {
    pub fn new(mut coeffs: Vec<Fe>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.0
    }

    pub fn lead(&self) -> Fe {
        self.0.last().copied().unwrap_or(Fe::ZERO)
    }

    /// Quotient of synthetic division by `x - r` (the remainder is dropped).
    pub fn div_linear(&self, f: &FieldCtx, r: Fe) -> Poly {
        if self.0.len() <= 1 {
            return Poly(Vec::new());
        }
        let n = self.0.len();
        let mut q = vec![Fe::ZERO; n - 1];
        let mut acc = Fe::ZERO;
        for i in (1..n).rev() {
            acc = f.add(f.mul(acc, r), self.0[i]);
            q[i - 1] = acc;
        }
        Poly::new(q)
    }

    pub fn derivative(&self, f: &FieldCtx) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
                .collect(),
        )
    }

    pub fn monic(&self, f: &FieldCtx) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = f.inv(self.lead()).expect("nonzero lead");
        Poly(self.0.iter().map(|&c| f.mul(c, inv)).collect())
    }

    pub fn add(&self, f: &FieldCtx, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let get = |v: &[Fe], i: usize| v.get(i).copied().unwrap_or(Fe::ZERO);
        Poly::new(
            (0..n)
                .map(|i| f.add(get(&self.0, i), get(&other.0, i)))
                .collect(),
        )
    }

    pub fn scale(&self, f: &FieldCtx, c: Fe) -> Poly {
        Poly::new(self.0.iter().map(|&x| f.mul(x, c)).collect())
    }

    pub fn mul(&self, f: &FieldCtx, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly(Vec::new());
        }
        let mut out = vec![Fe::ZERO; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, f: &FieldCtx, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut r = self.0.clone();
        let dd = d.0.len() - 1;
        let inv = f.inv(d.lead()).unwrap();
        let mut q = vec![Fe::ZERO; r.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - dd;
            let c = f.mul(lead, inv);
            q[shift] = c;
            for (k, &dk) in d.0.iter().enumerate() {
                r[shift + k] = f.sub(r[shift + k], f.mul(c, dk));
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        (Poly::new(q), Poly::new(r))
    }

    pub fn gcd(&self, f: &FieldCtx, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(f, &b);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// Polynomial in `x` whose coefficients are the `p`-th roots of ours,
    /// valid when only exponents divisible by `p` occur.
    fn pth_root(&self, f: &FieldCtx) -> Poly {
        let p = f.p() as usize;
        let root = |c: Fe| f.frob_power(c, f.n() - 1);
        Poly::new(self.0.iter().step_by(p).map(|&c| root(c)).collect())
    }

    /// Product of the distinct monic irreducible factors (over a perfect field).
    pub fn radical(&self, f: &FieldCtx) -> Poly {
        if self.degree().unwrap_or(0) == 0 {
            return Poly(vec![Fe::ONE]);
        }
        let d = self.derivative(f);
        if d.is_zero() {
            return self.pth_root(f).radical(f);
        }
        let g = self.gcd(f, &d);
        let (r1, _) = self.divrem(f, &g);
        let rg = g.radical(f);
        let common = r1.gcd(f, &rg);
        let (rest, _) = rg.divrem(f, &common);
        r1.mul(f, &rest).monic(f)
    }

    fn mulmod(&self, f: &FieldCtx, other: &Poly, m: &Poly) -> Poly {
        self.mul(f, other).divrem(f, m).1
    }

    /// `self^e mod m`.
    fn powmod(&self, f: &FieldCtx, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.divrem(f, m).1;
        let mut acc = Poly(vec![Fe::ONE]).divrem(f, m).1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(f, &base, m);
            }
            base = base.mulmod(f, &base, m);
            e >>= 1;
        }
        acc
    }

    /// Distinct roots in the field of a nonzero polynomial, ascending by
    /// field-element order.
    ///
    /// The split part `gcd(f, x^Q - x)` is peeled off first. Degrees up to three
    /// go to the closed-form solvers; larger products of distinct linear factors
    /// are split by `gcd` with `(x + c)^((Q-1)/2) - 1`, or with the absolute
    /// trace of `c x` in characteristic two.
    pub fn split_roots(&self, f: &FieldCtx) -> Vec<Fe> {
        let mut out = match self.degree() {
            None | Some(0) => Vec::new(),
            Some(d) if d <= 3 => {
                let c = |i: usize| self.0.get(i).copied().unwrap_or(Fe::ZERO);
                f.solve_cubic(c(3), c(2), c(1), c(0)).to_vec(f)
            }
            Some(_) => {
                let m = self.monic(f);
                let x = Poly(vec![Fe::ZERO, Fe::ONE]);
                let xq = x.powmod(f, f.size() as u64, &m);
                let split = m.gcd(f, &xq.add(f, &x.scale(f, f.neg(Fe::ONE))));
                split.split_distinct(f)
            }
        };
        out.sort_by_key(|&a| f.lex_key(a));
        out
    }

    /// Roots of a monic product of distinct linear factors.
    fn split_distinct(&self, f: &FieldCtx) -> Vec<Fe> {
        if self.degree().unwrap_or(0) <= 3 {
            return self.split_roots(f);
        }
        let x = Poly(vec![Fe::ZERO, Fe::ONE]);
        for c in f.elements().skip(1) {
            let probe = if f.p() == 2 {
                let cx = x.scale(f, c);
                let mut t = cx.clone();
                let mut acc = cx;
                for _ in 1..f.n() {
                    t = t.mulmod(f, &t, self);
                    acc = acc.add(f, &t);
                }
                acc
            } else {
                let shifted = Poly(vec![c, Fe::ONE]);
                shifted
                    .powmod(f, (f.size() as u64 - 1) / 2, self)
                    .add(f, &Poly(vec![f.neg(Fe::ONE)]))
            };
            let g = self.gcd(f, &probe);
            let d = g.degree().unwrap_or(0);
            if d > 0 && d < self.degree().unwrap() {
                let (h, _) = self.divrem(f, &g);
                let mut r = g.split_distinct(f);
                r.extend(h.monic(f).split_distinct(f));
                return r;
            }
        }
        unreachable!("a product of distinct linear factors splits")
    }

    /// Number of distinct roots over the algebraic closure.
    pub fn distinct_root_count(&self, f: &FieldCtx) -> usize {
        self.radical(f).degree().unwrap_or(0)
    }
}

/// Binary form `sum c_i x^i y^(n-i)` given by ascending coefficients of `x`.
/// Returns the number of distinct roots in `P^1` over the closure.
pub fn binary_form_distinct_roots(f: &FieldCtx, coeffs: &[Fe]) -> usize {
    let n = coeffs.len() - 1;
    let p = Poly::new(coeffs.to_vec());
    let deg = p.degree().unwrap_or(0);
    let at_infinity = usize::from(deg < n);
    p.distinct_root_count(f) + at_infinity
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn split_roots_match_the_exhaustive_scan(
            field in prop::sample::select(vec![(2u32, 3u32), (2, 5), (3, 2), (3, 3), (5, 2), (7, 1)]),
            raw in prop::collection::vec(any::<u32>(), 1..10),
            linear in prop::collection::vec(any::<u32>(), 0..6),
        ) {
            let f = FieldCtx::new(field.0, field.1).unwrap();
            let q = f.size();
            // mix in split factors so high-degree split parts occur
            let mut p = Poly::new(raw.iter().map(|&c| Fe(c % q)).collect());
            for &r in &linear {
                p = p.mul(&f, &Poly::new(vec![Fe(r % q), Fe::ONE]));
            }
            prop_assume!(!p.is_zero());
            let want: Vec<Fe> = f.roots(p.coeffs()).unwrap().into_iter().map(|(x, _)| x).collect();
            prop_assert_eq!(p.split_roots(&f), want);
        }
    }

    #[test]
    fn radical_handles_pth_powers() {
        let f = FieldCtx::new(2, 3).unwrap();
        // (x+1)^2 (x^2 + x + 1)^... over F_8: x^4 + 1 = (x+1)^4
        let x4p1 = Poly::new(vec![Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ZERO, Fe::ONE]);
        assert_eq!(x4p1.distinct_root_count(&f), 1);
        // x^3 + x has roots 0 and 1 (double) in char 2
        let p = Poly::new(vec![Fe::ZERO, Fe::ONE, Fe::ZERO, Fe::ONE]);
        assert_eq!(p.distinct_root_count(&f), 2);
        let f3 = FieldCtx::new(3, 1).unwrap();
        // x^3 - x has three simple roots; x^3 - 1 = (x-1)^3
        let a = Poly::new(vec![Fe::ZERO, f3.from_int(-1), Fe::ZERO, Fe::ONE]);
        assert_eq!(a.distinct_root_count(&f3), 3);
        let b = Poly::new(vec![f3.from_int(-1), Fe::ZERO, Fe::ZERO, Fe::ONE]);
        assert_eq!(b.distinct_root_count(&f3), 1);
        // binary form x y^2: roots x=0 and y=0 (double)
        assert_eq!(
            binary_form_distinct_roots(&f3, &[Fe::ZERO, Fe::ONE, Fe::ZERO]),
            2
        );
    }

    #[test]
    fn divrem_reconstructs() {
        let f = FieldCtx::new(5, 2).unwrap();
        let a = Poly::new((0..7).map(|i| Fe((i * 7 + 3) % 25)).collect());
        let b = Poly::new(vec![Fe(4), Fe(9), Fe(1)]);
        let (q, r) = a.divrem(&f, &b);
        let back = q.mul(&f, &b);
        let sum: Vec<Fe> = (0..7)
            .map(|i| {
                let x = back.coeffs().get(i).copied().unwrap_or(Fe::ZERO);
                let y = r.coeffs().get(i).copied().unwrap_or(Fe::ZERO);
                f.add(x, y)
            })
            .collect();
        assert_eq!(Poly::new(sum), a);
    }
}
