//! Finite fields `F_{p^n}` of desk-scale size.
//!
//! Elements are stored as the integer `sum c_i p^i` of their coefficient
//! vector modulo the field's defining polynomial. Multiplication goes through
//! discrete-log tables built from a primitive element; addition is XOR in
//! characteristic two and a Zech-logarithm lookup otherwise.

mod poly;
mod solve;

pub use poly::{binary_form_distinct_roots, Poly};
pub use solve::Solutions;

use crate::error::{Error, Result};

/// Largest field size accepted by default (`2^13`).
pub const DEFAULT_FIELD_CAP: u64 = 8192;

const NONE: u32 = u32::MAX;

/// An element of some [`FieldCtx`]. Only meaningful together with its field.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Fe(pub(crate) u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    /// The integer encoding `sum c_i p^i`.
    pub fn raw(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// An explicit presentation of `F_{p^n} = F_p[t] / (modulus)`.
#[derive(Debug)]
pub struct FieldCtx {
    p: u32,
    n: u32,
    size: u32,
    modulus: Vec<u32>,
    /// `exp[i] = g^i`, stored twice over so that sums of two logs need no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `zech[d] = log(1 + g^d)`, or `NONE` when `1 + g^d = 0`. Odd characteristic only.
    zech: Vec<u32>,
    neg: Vec<u32>,
    lex: Vec<u32>,
    tables: solve::RootTables,
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldCtx {
    /// `make_field(p, n)` with the default size cap.
    pub fn new(p: u32, n: u32) -> Result<FieldCtx> {
        FieldCtx::with_cap(p, n, DEFAULT_FIELD_CAP)
    }

    pub fn with_cap(p: u32, n: u32, cap: u64) -> Result<FieldCtx> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if n == 0 {
            return Err(Error::Invalid("extension degree must be positive".into()));
        }
        let size = (p as u64).checked_pow(n).unwrap_or(u64::MAX);
        if size > cap || size > u32::MAX as u64 / 4 {
            return Err(Error::FieldCap { size, cap });
        }
        let modulus = smallest_irreducible(p, n);
        Ok(FieldCtx::from_modulus(p, n, modulus))
    }

    fn from_modulus(p: u32, n: u32, modulus: Vec<u32>) -> FieldCtx {
        let size = p.pow(n);
        let order = size - 1;
        let digits = |v: u32| -> Vec<u32> {
            let mut v = v;
            (0..n)
                .map(|_| {
                    let d = v % p;
                    v /= p;
                    d
                })
                .collect()
        };
        let encode = |c: &[u32]| -> u32 { c.iter().rev().fold(0, |acc, &d| acc * p + d) };
        let mulmod = |a: &[u32], b: &[u32]| -> Vec<u32> {
            let mut prod = vec![0u64; 2 * n as usize];
            for (i, &x) in a.iter().enumerate() {
                for (j, &y) in b.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
                }
            }
            // reduce by the monic modulus from the top
            for deg in (n as usize..prod.len()).rev() {
                let c = prod[deg];
                if c == 0 {
                    continue;
                }
                prod[deg] = 0;
                for k in 0..n as usize {
                    let sub = c * modulus[k] as u64 % p as u64;
                    let idx = deg - n as usize + k;
                    prod[idx] = (prod[idx] + p as u64 - sub) % p as u64;
                }
            }
            prod[..n as usize].iter().map(|&x| x as u32).collect()
        };

        // smallest primitive element in encoding order
        let mut exp = Vec::new();
        if order == 1 {
            exp.push(1);
        } else {
            for cand in 2..size.max(3) {
                let g = digits(cand);
                let mut cur = digits(1);
                let mut powers = Vec::with_capacity(order as usize);
                let mut ok = true;
                for i in 0..order {
                    let v = encode(&cur);
                    if i > 0 && v == 1 {
                        ok = false;
                        break;
                    }
                    powers.push(v);
                    cur = mulmod(&cur, &g);
                }
                if ok && encode(&cur) == 1 {
                    exp = powers;
                    break;
                }
            }
        }
        assert_eq!(exp.len(), order as usize, "no primitive element found");
        let mut log = vec![NONE; size as usize];
        for (i, &v) in exp.iter().enumerate() {
            log[v as usize] = i as u32;
        }
        let doubled: Vec<u32> = exp.iter().chain(exp.iter()).copied().collect();

        let neg: Vec<u32> = (0..size)
            .map(|v| encode(&digits(v).iter().map(|&d| (p - d) % p).collect::<Vec<_>>()))
            .collect();
        let zech = if p == 2 {
            Vec::new()
        } else {
            (0..order)
                .map(|d| {
                    let mut c = digits(exp[d as usize]);
                    c[0] = (c[0] + 1) % p;
                    let v = encode(&c);
                    if v == 0 {
                        NONE
                    } else {
                        log[v as usize]
                    }
                })
                .collect()
        };
        let lex = (0..size)
            .map(|v| digits(v).iter().fold(0, |acc, &d| acc * p + d))
            .collect();

        let mut ctx = FieldCtx {
            p,
            n,
            size,
            modulus,
            exp: doubled,
            log,
            zech,
            neg,
            lex,
            tables: solve::RootTables::default(),
        };
        ctx.tables = solve::RootTables::build(&ctx);
        ctx
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    /// Monic defining polynomial, ascending coefficients (length `n + 1`).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    /// The class of `t` in `F_p[t]/(modulus)`.
    pub fn generator(&self) -> Fe {
        if self.n == 1 {
            Fe::ZERO
        } else {
            Fe(self.p)
        }
    }

    pub fn primitive(&self) -> Fe {
        Fe(self.exp[if self.size == 2 { 0 } else { 1 }])
    }

    pub fn contains(&self, a: Fe) -> bool {
        a.0 < self.size
    }

    pub fn check(&self, a: Fe) -> Result<Fe> {
        if self.contains(a) {
            Ok(a)
        } else {
            Err(Error::ForeignElement(a.0))
        }
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, v: i64) -> Fe {
        Fe(v.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Fe> {
        if coeffs.len() > self.n as usize {
            // allow higher-degree input by reducing it
            return Ok(self.eval_prime_poly(coeffs, self.generator()));
        }
        let mut v = 0u32;
        for &c in coeffs.iter().rev() {
            if c >= self.p {
                return Err(Error::Invalid(format!(
                    "coefficient {c} not reduced mod {}",
                    self.p
                )));
            }
            v = v * self.p + c;
        }
        Ok(Fe(v))
    }

    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        let mut v = a.0;
        (0..self.n)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    /// Sort key comparing coefficient vectors low-degree-first.
    pub fn lex_key(&self, a: Fe) -> u32 {
        self.lex[a.0 as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.size).map(Fe)
    }

    /// Elements sorted by [`FieldCtx::lex_key`].
    pub fn elements_lex(&self) -> Vec<Fe> {
        let mut v: Vec<Fe> = self.elements().collect();
        v.sort_by_key(|&a| self.lex_key(a));
        v
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let order = self.size - 1;
        let la = self.log[a.0 as usize];
        let lb = self.log[b.0 as usize];
        let d = if lb >= la { lb - la } else { lb + order - la };
        let z = self.zech[d as usize];
        if z == NONE {
            Fe::ZERO
        } else {
            Fe(self.exp[(la + z) as usize])
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        Fe(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let order = self.size - 1;
        let l = self.log[a.0 as usize];
        Ok(Fe(self.exp[((order - l) % order.max(1)) as usize]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Checked variant of the arithmetic suite for values of unknown provenance.
    pub fn checked_mul(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(self.check(a)?, self.check(b)?))
    }

    pub fn checked_add(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.add(self.check(a)?, self.check(b)?))
    }

    pub fn checked_div(&self, a: Fe, b: Fe) -> Result<Fe> {
        self.div(self.check(a)?, self.check(b)?)
    }

    /// Square-and-multiply exponentiation.
    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `x -> x^(p^m)` computed through the log table.
    #[inline]
    pub fn frob_power(&self, a: Fe, m: u32) -> Fe {
        if a.0 == 0 {
            return a;
        }
        let order = (self.size - 1) as u64;
        let shift = (self.p as u64).pow(m % self.n) % order.max(1);
        let l = self.log[a.0 as usize] as u64 * shift % order.max(1);
        Fe(self.exp[l as usize])
    }

    /// `x -> x^q` where `q` must be a power of the characteristic.
    pub fn frobenius(&self, a: Fe, q: u64) -> Result<Fe> {
        let m = char_power_exponent(q, self.p)?;
        Ok(self.frob_power(a, m))
    }

    /// True iff `a` lies in the subfield `F_{p^m}`; false whenever `m` does not divide `n`.
    pub fn in_subfield(&self, a: Fe, m: u32) -> bool {
        if m == 0 || !self.n.is_multiple_of(m) {
            return false;
        }
        if a.0 == 0 {
            return true;
        }
        let step = (self.size - 1) / (self.p.pow(m) - 1);
        self.log[a.0 as usize].is_multiple_of(step)
    }

    /// Elements of `F_{p^m}` in lexicographic order.
    pub fn subfield_elements(&self, m: u32) -> Result<Vec<Fe>> {
        if m == 0 || !self.n.is_multiple_of(m) {
            return Err(Error::Invalid(format!("{m} does not divide {}", self.n)));
        }
        let mut v: Vec<Fe> = self
            .elements()
            .filter(|&a| self.in_subfield(a, m))
            .collect();
        v.sort_by_key(|&a| self.lex_key(a));
        Ok(v)
    }

    pub fn is_square(&self, a: Fe) -> bool {
        a.0 == 0 || self.p == 2 || self.log[a.0 as usize].is_multiple_of(2)
    }

    /// One square root, if any.
    pub fn sqrt(&self, a: Fe) -> Option<Fe> {
        if a.0 == 0 {
            return Some(a);
        }
        let order = self.size - 1;
        let l = self.log[a.0 as usize];
        if self.p == 2 {
            // order is odd: halve modulo the group order
            let half = (l as u64 * (order as u64).div_ceil(2)) % order as u64;
            return Some(Fe(self.exp[half as usize]));
        }
        l.is_multiple_of(2).then(|| Fe(self.exp[(l / 2) as usize]))
    }

    /// Discrete log with respect to the primitive element.
    pub(crate) fn log_of(&self, a: Fe) -> u32 {
        self.log[a.0 as usize]
    }

    pub(crate) fn exp_of(&self, e: u64) -> Fe {
        Fe(self.exp[(e % (self.size as u64 - 1)) as usize])
    }

    /// Evaluate a polynomial with `F_p` coefficients (ascending) at `x`.
    pub fn eval_prime_poly(&self, coeffs: &[u32], x: Fe) -> Fe {
        coeffs.iter().rev().fold(Fe::ZERO, |acc, &c| {
            self.add(self.mul(acc, x), self.from_int(c as i64))
        })
    }

    /// Evaluate a polynomial with coefficients in this field (ascending) at `x`.
    pub fn eval_poly(&self, coeffs: &[Fe], x: Fe) -> Fe {
        coeffs
            .iter()
            .rev()
            .fold(Fe::ZERO, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// All roots of `f` (ascending coefficients) in this field, with multiplicities,
    /// found by scanning every element.
    pub fn roots(&self, f: &[Fe]) -> Result<Vec<(Fe, u32)>> {
        let f = Poly::new(f.to_vec());
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut out = Vec::new();
        for x in self.elements_lex() {
            if self.eval_poly(f.coeffs(), x).is_zero() {
                let mut g = f.clone();
                let mut mult = 0;
                while !g.is_zero() && self.eval_poly(g.coeffs(), x).is_zero() {
                    g = g.div_linear(self, x);
                    mult += 1;
                }
                out.push((x, mult));
            }
        }
        Ok(out)
    }

    /// Canonical root of an `F_p`-polynomial in this field: the lexicographically
    /// smallest one.
    pub fn embed_generator(&self, def_poly: &[u32]) -> Result<Fe> {
        let coeffs: Vec<Fe> = def_poly.iter().map(|&c| self.from_int(c as i64)).collect();
        let deg = coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
        let roots = self.roots(&coeffs)?;
        roots.first().map(|r| r.0).ok_or(Error::NoRoot {
            deg,
            p: self.p,
            n: self.n,
        })
    }

    pub fn fmt_elem(&self, a: Fe) -> String {
        if self.n == 1 {
            return a.0.to_string();
        }
        let c = self.coeffs(a);
        let terms: Vec<String> = c
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &d)| d != 0)
            .map(|(i, &d)| match (i, d) {
                (0, d) => d.to_string(),
                (1, 1) => "a".to_string(),
                (1, d) => format!("{d}a"),
                (i, 1) => format!("a^{i}"),
                (i, d) => format!("{d}a^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

/// A field embedding `small -> big`, tabulated on raw encodings.
#[derive(Clone, Debug)]
pub struct Embedding {
    table: Vec<Fe>,
}

impl Embedding {
    /// The embedding sending `small_anchor` to `big_anchor`, chosen among the
    /// conjugates of the canonical one by the fewest Frobenius twists.
    pub fn new(
        small: &FieldCtx,
        big: &FieldCtx,
        small_anchor: Fe,
        big_anchor: Fe,
    ) -> Result<Embedding> {
        if small.p != big.p || !big.n.is_multiple_of(small.n) {
            return Err(Error::Invalid(format!(
                "F_{}^{} does not embed in F_{}^{}",
                small.p, small.n, big.p, big.n
            )));
        }
        let rho = big.embed_generator(&small.modulus)?;
        for j in 0..small.n {
            let r = big.frob_power(rho, j);
            let table: Vec<Fe> = small
                .elements()
                .map(|x| big.eval_prime_poly(&small.coeffs(x), r))
                .collect();
            if table[small_anchor.0 as usize] == big_anchor {
                return Ok(Embedding { table });
            }
        }
        Err(Error::Invalid(
            "no embedding matches the requested anchor".into(),
        ))
    }

    #[inline]
    pub fn apply(&self, x: Fe) -> Fe {
        self.table[x.0 as usize]
    }
}

/// `m` with `q = p^m`.
pub fn char_power_exponent(q: u64, p: u32) -> Result<u32> {
    let mut m = 0;
    let mut v = q;
    if v == 0 {
        return Err(Error::NotCharPower { q, p });
    }
    while v.is_multiple_of(p as u64) {
        v /= p as u64;
        m += 1;
    }
    if v != 1 || m == 0 {
        return Err(Error::NotCharPower { q, p });
    }
    Ok(m)
}

/// Remainder of `a` modulo the monic `b` over `F_p`.
fn prime_poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (k, &bk) in b.iter().enumerate() {
                let idx = shift + k;
                r[idx] = (r[idx] + p - (lead as u64 * bk as u64 % p as u64) as u32) % p;
            }
        }
        r.pop();
    }
    r
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    for d in 1..=n / 2 {
        let count = (p as u64).pow(d as u32);
        for j in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut v = j;
            for _ in 0..d {
                g.push((v % p as u64) as u32);
                v /= p as u64;
            }
            g.push(1);
            if prime_poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree `n` over `F_p`,
/// comparing coefficient vectors constant-term first.
pub fn smallest_irreducible(p: u32, n: u32) -> Vec<u32> {
    let count = (p as u64).pow(n);
    for j in 0..count {
        // the constant term is the most significant digit of j
        let mut c = vec![0u32; n as usize + 1];
        let mut v = j;
        for i in (0..n as usize).rev() {
            c[i] = (v % p as u64) as u32;
            v /= p as u64;
        }
        c[n as usize] = 1;
        if is_irreducible(&c, p) {
            return c;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn alpha(f: &FieldCtx) -> Fe {
        f.generator()
    }

    #[test]
    fn modulus_choices() {
        assert_eq!(FieldCtx::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FieldCtx::new(2, 1).unwrap().modulus(), &[0, 1]);
        let f9 = FieldCtx::new(3, 2).unwrap();
        // exhaustive root check: a degree-2 polynomial is irreducible iff rootless
        let m = f9.modulus().to_vec();
        assert_eq!(m.len(), 3);
        for x in 0..3u32 {
            let v = (m[0] + m[1] * x + m[2] * x * x) % 3;
            assert_ne!(v, 0);
        }
        assert_eq!(m, vec![1, 0, 1]);
    }

    #[test]
    fn field_errors() {
        assert_eq!(FieldCtx::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(FieldCtx::new(2, 14), Err(Error::FieldCap { .. })));
        let f = FieldCtx::new(2, 2).unwrap();
        assert_eq!(f.div(Fe::ONE, Fe::ZERO), Err(Error::DivisionByZero));
        assert_eq!(f.checked_mul(Fe(7), Fe::ONE), Err(Error::ForeignElement(7)));
        assert!(matches!(
            f.frobenius(Fe::ONE, 6),
            Err(Error::NotCharPower { .. })
        ));
    }

    #[test]
    fn f4_arithmetic() {
        let f = FieldCtx::new(2, 2).unwrap();
        let a = alpha(&f);
        let a1 = f.add(a, Fe::ONE);
        assert_eq!(f.mul(a, a), a1);
        assert_eq!(f.inv(a).unwrap(), a1);
        assert_eq!(f.frobenius(a, 2).unwrap(), a1);
    }

    #[test]
    fn group_orders() {
        for (p, n) in [
            (2, 1),
            (2, 3),
            (2, 6),
            (3, 1),
            (3, 2),
            (3, 4),
            (5, 2),
            (7, 1),
            (2, 12),
        ] {
            let f = FieldCtx::new(p, n).unwrap();
            for x in f.elements().skip(1) {
                assert_eq!(f.pow(x, f.size() as u64 - 1), Fe::ONE, "F_{p}^{n}");
            }
        }
    }

    #[test]
    fn f8_multiplicative_order_divides_7() {
        let f = FieldCtx::new(2, 3).unwrap();
        for g in f.elements().skip(1) {
            assert_eq!(f.pow(g, 7), Fe::ONE);
        }
    }

    #[test]
    fn frobenius_fixes_prime_field_and_has_order_three_on_f64_over_f4() {
        let f = FieldCtx::new(2, 6).unwrap();
        for x in f.elements() {
            let y = f
                .frobenius(f.frobenius(f.frobenius(x, 4).unwrap(), 4).unwrap(), 4)
                .unwrap();
            assert_eq!(x, y);
        }
        let f7 = FieldCtx::new(7, 2).unwrap();
        for c in 0..7 {
            let x = f7.from_int(c);
            assert_eq!(f7.frobenius(x, 7).unwrap(), x);
        }
    }

    #[test]
    fn subfield_sizes() {
        for (p, n) in [(2, 6), (3, 4), (2, 12), (5, 2)] {
            let f = FieldCtx::new(p, n).unwrap();
            for m in 1..=n {
                let count = f.elements().filter(|&x| f.in_subfield(x, m)).count();
                if n % m == 0 {
                    assert_eq!(count as u32, p.pow(m));
                } else {
                    assert_eq!(count, 0);
                }
            }
        }
        let f64 = FieldCtx::new(2, 6).unwrap();
        assert_eq!(f64.elements().filter(|&x| f64.in_subfield(x, 3)).count(), 8);
        let f4 = FieldCtx::new(2, 2).unwrap();
        assert!(!f4.in_subfield(alpha(&f4), 1));
        let a = f64.embed_generator(&[1, 1, 1]).unwrap();
        assert!(f64.in_subfield(a, 2));
    }

    #[test]
    fn exhaustive_roots() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        let t2t1 = [Fe::ONE, Fe::ONE, Fe::ONE];
        assert!(f2.roots(&t2t1).unwrap().is_empty());
        let f4 = FieldCtx::new(2, 2).unwrap();
        let r: Vec<Fe> = f4.roots(&t2t1).unwrap().into_iter().map(|x| x.0).collect();
        let a = alpha(&f4);
        assert_eq!(r, vec![a, f4.add(a, Fe::ONE)]);
        let cube_plus_one = [Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ONE];
        let r = f4.roots(&cube_plus_one).unwrap();
        assert_eq!(r.len(), 3);
        assert!(r.iter().all(|&(_, m)| m == 1));
        // (t-1)^2 over F_5 has a double root
        let f5 = FieldCtx::new(5, 1).unwrap();
        let sq = [Fe::ONE, f5.from_int(-2), Fe::ONE];
        assert_eq!(f5.roots(&sq).unwrap(), vec![(Fe::ONE, 2)]);
        assert_eq!(f5.roots(&[Fe::ZERO]), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn embed_generator_canonical() {
        let f4 = FieldCtx::new(2, 2).unwrap();
        assert_eq!(f4.embed_generator(&[1, 1, 1]).unwrap(), alpha(&f4));
        let f64 = FieldCtx::new(2, 6).unwrap();
        let scan: Vec<Fe> = f64
            .elements_lex()
            .into_iter()
            .filter(|&x| f64.add(f64.add(f64.mul(x, x), x), Fe::ONE).is_zero())
            .collect();
        assert_eq!(scan.len(), 2);
        assert_eq!(f64.embed_generator(&[1, 1, 1]).unwrap(), scan[0]);
        assert_eq!(f64.embed_generator(&[0, 1]).unwrap(), Fe::ZERO);
        assert!(matches!(
            FieldCtx::new(2, 3).unwrap().embed_generator(&[1, 1, 1]),
            Err(Error::NoRoot { .. })
        ));
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        // F_4 -> F_64 via alpha -> canonical root, exhaustive over F_4 x F_4
        let small = FieldCtx::new(2, 2).unwrap();
        let big = FieldCtx::new(2, 6).unwrap();
        let rho = big.embed_generator(small.modulus()).unwrap();
        let map = |x: Fe| big.eval_prime_poly(&small.coeffs(x), rho);
        for a in small.elements() {
            for b in small.elements() {
                assert_eq!(map(small.add(a, b)), big.add(map(a), map(b)));
                assert_eq!(map(small.mul(a, b)), big.mul(map(a), map(b)));
            }
        }
        let small = FieldCtx::new(3, 2).unwrap();
        let big = FieldCtx::new(3, 4).unwrap();
        let rho = big.embed_generator(small.modulus()).unwrap();
        let map = |x: Fe| big.eval_prime_poly(&small.coeffs(x), rho);
        for a in small.elements() {
            for b in small.elements() {
                assert_eq!(map(small.add(a, b)), big.add(map(a), map(b)));
                assert_eq!(map(small.mul(a, b)), big.mul(map(a), map(b)));
            }
        }
    }

    #[test]
    fn anchored_embedding() {
        let small = FieldCtx::new(2, 2).unwrap();
        let big = FieldCtx::new(2, 6).unwrap();
        let a = small.generator();
        let roots: Vec<Fe> = big
            .roots(&[Fe::ONE, Fe::ONE, Fe::ONE])
            .unwrap()
            .into_iter()
            .map(|r| r.0)
            .collect();
        for &target in &roots {
            let e = Embedding::new(&small, &big, a, target).unwrap();
            assert_eq!(e.apply(a), target);
            for x in small.elements() {
                for y in small.elements() {
                    assert_eq!(e.apply(small.mul(x, y)), big.mul(e.apply(x), e.apply(y)));
                }
            }
        }
        assert!(Embedding::new(&small, &FieldCtx::new(2, 3).unwrap(), a, Fe::ONE).is_err());
    }

    #[test]
    fn coefficient_roundtrip_and_lex() {
        let f = FieldCtx::new(3, 3).unwrap();
        for x in f.elements() {
            assert_eq!(f.from_coeffs(&f.coeffs(x)).unwrap(), x);
        }
        // (1,0,0) < (0,1,0) is false: constant term compared first
        let a = f.from_coeffs(&[0, 1, 0]).unwrap();
        let b = f.from_coeffs(&[1, 0, 0]).unwrap();
        assert!(f.lex_key(a) < f.lex_key(b));
    }

    proptest! {
        #[test]
        fn frobenius_is_a_ring_map(p_idx in 0usize..4, a in 0u32..10_000, b in 0u32..10_000) {
            let (p, n) = [(2, 6), (3, 4), (5, 3), (2, 12)][p_idx];
            let f = FieldCtx::new(p, n).unwrap();
            let a = Fe(a % f.size());
            let b = Fe(b % f.size());
            let q = p as u64;
            let fr = |x| f.frobenius(x, q).unwrap();
            prop_assert_eq!(fr(f.add(a, b)), f.add(fr(a), fr(b)));
            prop_assert_eq!(fr(f.mul(a, b)), f.mul(fr(a), fr(b)));
        }

        #[test]
        fn field_axioms(p_idx in 0usize..4, a in 0u32..10_000, b in 0u32..10_000, c in 0u32..10_000) {
            let (p, n) = [(2, 5), (3, 3), (7, 2), (13, 1)][p_idx];
            let f = FieldCtx::new(p, n).unwrap();
            let (a, b, c) = (Fe(a % f.size()), Fe(b % f.size()), Fe(c % f.size()));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            prop_assert_eq!(f.sub(f.add(a, b), b), a);
            if !b.is_zero() {
                prop_assert_eq!(f.mul(f.div(a, b).unwrap(), b), a);
            }
        }
    }
}
