use crate::error::{Error, Result};
use crate::ffield::{Fe, FieldCtx};

/// Exponent tuples of all monomials of the given degree, in descending lex order.
pub fn monomials(nvars: usize, degree: usize) -> Vec<Vec<u8>> {
    fn rec(nvars: usize, degree: usize, prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if nvars == 1 {
            prefix.push(degree as u8);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=degree).rev() {
            prefix.push(e as u8);
            rec(nvars - 1, degree - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars > 0 {
        rec(nvars, degree, &mut Vec::new(), &mut out);
    }
    out
}

fn count(nvars: usize, degree: usize) -> usize {
    if nvars == 0 {
        return usize::from(degree == 0);
    }
    // C(nvars + degree - 1, degree)
    let mut c = 1usize;
    for i in 0..degree {
        c = c * (nvars + i) / (i + 1);
    }
    c
}

fn index_of(exps: &[u8]) -> usize {
    let nvars = exps.len();
    let mut rest: usize = exps.iter().map(|&e| e as usize).sum();
    let mut idx = 0;
    for (i, &e) in exps.iter().enumerate().take(nvars - 1) {
        for larger in (e as usize + 1)..=rest {
            idx += count(nvars - i - 1, rest - larger);
        }
        rest -= e as usize;
    }
    idx
}

/// A homogeneous polynomial with dense coefficients in [`monomials`] order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomForm {
    nvars: usize,
    degree: usize,
    coeffs: Vec<Fe>,
}

impl HomForm {
    pub fn zero(nvars: usize, degree: usize) -> HomForm {
        HomForm {
            nvars,
            degree,
            coeffs: vec![Fe::ZERO; count(nvars, degree)],
        }
    }

    pub fn new(nvars: usize, degree: usize, coeffs: Vec<Fe>) -> Result<HomForm> {
        if coeffs.len() != count(nvars, degree) {
            return Err(Error::Invalid(format!(
                "expected {} coefficients for a degree-{degree} form in {nvars} variables, got {}",
                count(nvars, degree),
                coeffs.len()
            )));
        }
        Ok(HomForm {
            nvars,
            degree,
            coeffs,
        })
    }

    /// Form from sparse `(exponents, coefficient)` records; repeated monomials add up.
    pub fn from_terms(
        f: &FieldCtx,
        nvars: usize,
        degree: usize,
        terms: &[(Vec<u8>, Fe)],
    ) -> Result<HomForm> {
        let mut h = HomForm::zero(nvars, degree);
        for (e, c) in terms {
            if e.len() != nvars || e.iter().map(|&x| x as usize).sum::<usize>() != degree {
                return Err(Error::Invalid(format!("bad exponent tuple {e:?}")));
            }
            let i = index_of(e);
            h.coeffs[i] = f.add(h.coeffs[i], *c);
        }
        Ok(h)
    }

    /// The linear form `sum c_i x_i`.
    pub fn linear(coeffs: &[Fe]) -> HomForm {
        // degree-1 monomials in descending lex order are x_0, x_1, ...
        HomForm {
            nvars: coeffs.len(),
            degree: 1,
            coeffs: coeffs.to_vec(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, exps: &[u8]) -> Fe {
        self.coeffs[index_of(exps)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Nonzero terms in monomial order.
    pub fn terms(&self) -> Vec<(Vec<u8>, Fe)> {
        monomials(self.nvars, self.degree)
            .into_iter()
            .zip(self.coeffs.iter().copied())
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    pub fn map_coeffs(&self, phi: impl Fn(Fe) -> Fe) -> HomForm {
        HomForm {
            nvars: self.nvars,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|&c| phi(c)).collect(),
        }
    }

    pub fn scale(&self, f: &FieldCtx, c: Fe) -> HomForm {
        self.map_coeffs(|x| f.mul(x, c))
    }

    pub fn add(&self, f: &FieldCtx, other: &HomForm) -> HomForm {
        assert_eq!((self.nvars, self.degree), (other.nvars, other.degree));
        HomForm {
            nvars: self.nvars,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn eval(&self, f: &FieldCtx, x: &[Fe]) -> Fe {
        assert_eq!(x.len(), self.nvars);
        let mut acc = Fe::ZERO;
        for (e, &c) in monomials(self.nvars, self.degree).iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            let mut t = c;
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t = f.mul(t, x[i]);
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// Formal partial derivative in `x_i`, exponents reduced into the field.
    pub fn partial(&self, f: &FieldCtx, i: usize) -> HomForm {
        assert!(self.degree >= 1);
        let mut out = HomForm::zero(self.nvars, self.degree - 1);
        for (e, c) in self.terms() {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            let idx = index_of(&d);
            out.coeffs[idx] = f.add(out.coeffs[idx], f.mul(f.from_int(e[i] as i64), c));
        }
        out
    }

    pub fn partials(&self, f: &FieldCtx) -> Vec<HomForm> {
        (0..self.nvars).map(|i| self.partial(f, i)).collect()
    }

    pub fn mul(&self, f: &FieldCtx, other: &HomForm) -> HomForm {
        assert_eq!(self.nvars, other.nvars);
        let mut out = HomForm::zero(self.nvars, self.degree + other.degree);
        let ta = self.terms();
        let tb = other.terms();
        for (ea, ca) in &ta {
            for (eb, cb) in &tb {
                let e: Vec<u8> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let idx = index_of(&e);
                out.coeffs[idx] = f.add(out.coeffs[idx], f.mul(*ca, *cb));
            }
        }
        out
    }

    /// Pull back along `x = sum_j y_j basis[j]`; the result is a form in `basis.len()` variables.
    pub fn substitute(&self, f: &FieldCtx, basis: &[&[Fe]]) -> HomForm {
        let m = basis.len();
        let linear: Vec<HomForm> = (0..self.nvars)
            .map(|i| HomForm::linear(&basis.iter().map(|b| b[i]).collect::<Vec<_>>()))
            .collect();
        let mut one = HomForm::zero(m, 0);
        one.coeffs[0] = Fe::ONE;
        let mut out = HomForm::zero(m, self.degree);
        for (e, c) in self.terms() {
            let mut t = one.scale(f, c);
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t = t.mul(f, &linear[i]);
                }
            }
            out = out.add(f, &t);
        }
        out
    }

    /// Binary form `f(s a + t b)`.
    pub fn restrict_line(&self, f: &FieldCtx, a: &[Fe], b: &[Fe]) -> HomForm {
        self.substitute(f, &[a, b])
    }

    /// Splits off the last variable: entry `j` is the coefficient of `x_last^j`,
    /// a form of degree `degree - j` in the remaining `E` variables.
    pub fn split_last<const E: usize>(&self) -> Vec<CompiledForm<E>> {
        assert_eq!(self.nvars, E + 1);
        let mut parts: Vec<CompiledForm<E>> = (0..=self.degree)
            .map(|j| CompiledForm {
                degree: self.degree - j,
                terms: Vec::new(),
            })
            .collect();
        for (e, c) in self.terms() {
            parts[e[E] as usize]
                .terms
                .push((c, std::array::from_fn(|i| e[i])));
        }
        parts
    }

    pub fn compile<const D: usize>(&self) -> CompiledForm<D> {
        assert_eq!(self.nvars, D);
        CompiledForm {
            degree: self.degree,
            terms: self
                .terms()
                .into_iter()
                .map(|(e, c)| (c, std::array::from_fn(|i| e[i])))
                .collect(),
        }
    }
}

/// Sparse evaluation form of a [`HomForm`] for hot loops.
#[derive(Clone, Debug)]
pub struct CompiledForm<const D: usize> {
    degree: usize,
    terms: Vec<(Fe, [u8; D])>,
}

impl<const D: usize> CompiledForm<D> {
    #[inline]
    pub fn eval(&self, f: &FieldCtx, x: &[Fe; D]) -> Fe {
        let mut pw = [[Fe::ONE; 4]; D];
        for i in 0..D {
            for e in 1..=self.degree.min(3) {
                pw[i][e] = f.mul(pw[i][e - 1], x[i]);
            }
        }
        let mut acc = Fe::ZERO;
        for (c, e) in &self.terms {
            let mut t = *c;
            for i in 0..D {
                t = f.mul(t, pw[i][e[i] as usize]);
            }
            acc = f.add(acc, t);
        }
        acc
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn monomial_order_and_index() {
        let m = monomials(4, 3);
        assert_eq!(m.len(), 20);
        assert_eq!(m[0], vec![3, 0, 0, 0]);
        assert_eq!(m[1], vec![2, 1, 0, 0]);
        assert_eq!(m[19], vec![0, 0, 0, 3]);
        assert_eq!(monomials(5, 2).len(), 15);
        for (nv, d) in [(2, 3), (3, 3), (4, 3), (5, 2), (4, 0)] {
            for (i, e) in monomials(nv, d).iter().enumerate() {
                assert_eq!(index_of(e), i);
            }
        }
    }

    fn fermat(f: &FieldCtx) -> HomForm {
        let terms: Vec<(Vec<u8>, Fe)> = (0..4)
            .map(|i| {
                (
                    (0..4).map(|j| if j == i { 3 } else { 0 }).collect(),
                    Fe::ONE,
                )
            })
            .collect();
        HomForm::from_terms(f, 4, 3, &terms).unwrap()
    }

    #[test]
    fn restriction_examples() {
        let f = FieldCtx::new(5, 1).unwrap();
        let e0 = [Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ZERO];
        let e1 = [Fe::ZERO, Fe::ONE, Fe::ZERO, Fe::ZERO];
        let r = fermat(&f).restrict_line(&f, &e0, &e1);
        assert_eq!(r.coeffs(), &[Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ONE]);
        assert!(HomForm::zero(4, 3).restrict_line(&f, &e0, &e1).is_zero());

        // X^2 Y + X Y^2 on {Z = W = 0} over F_2
        let f2 = FieldCtx::new(2, 1).unwrap();
        let h = HomForm::from_terms(
            &f2,
            4,
            3,
            &[(vec![2, 1, 0, 0], Fe::ONE), (vec![1, 2, 0, 0], Fe::ONE)],
        )
        .unwrap();
        let r = h.restrict_line(&f2, &e0, &e1);
        assert_eq!(r.coeffs(), &[Fe::ZERO, Fe::ONE, Fe::ONE, Fe::ZERO]);
    }

    #[test]
    fn partials_in_small_characteristic() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        let z3 = HomForm::from_terms(&f2, 4, 3, &[(vec![0, 0, 3, 0], Fe::ONE)]).unwrap();
        assert_eq!(z3.partial(&f2, 2).coeff(&[0, 0, 2, 0]), Fe::ONE);
        let x2y = HomForm::from_terms(&f2, 4, 3, &[(vec![2, 1, 0, 0], Fe::ONE)]).unwrap();
        assert!(x2y.partial(&f2, 0).is_zero());
    }

    fn random_form(f: &FieldCtx, rng: &mut impl Rng, nvars: usize, degree: usize) -> HomForm {
        let n = monomials(nvars, degree).len();
        HomForm::new(
            nvars,
            degree,
            (0..n).map(|_| Fe(rng.gen_range(0..f.size()))).collect(),
        )
        .unwrap()
    }

    #[test]
    fn euler_relation_over_f5() {
        let f = FieldCtx::new(5, 1).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let g = random_form(&f, &mut rng, 4, 3);
            let parts = g.partials(&f);
            let x: [Fe; 4] = std::array::from_fn(|_| Fe(rng.gen_range(0..5)));
            let lhs = (0..4).fold(Fe::ZERO, |a, i| {
                f.add(a, f.mul(x[i], parts[i].eval(&f, &x)))
            });
            assert_eq!(lhs, f.mul(f.from_int(3), g.eval(&f, &x)));
        }
    }

    #[test]
    fn restriction_commutes_with_evaluation() {
        let f = FieldCtx::new(2, 2).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let g = random_form(&f, &mut rng, 4, 3);
            let a: [Fe; 4] = std::array::from_fn(|_| Fe(rng.gen_range(0..4)));
            let b: [Fe; 4] = std::array::from_fn(|_| Fe(rng.gen_range(0..4)));
            let r = g.restrict_line(&f, &a, &b);
            let c = g.compile::<4>();
            for s in f.elements() {
                for t in f.elements() {
                    let x: [Fe; 4] = std::array::from_fn(|i| f.add(f.mul(s, a[i]), f.mul(t, b[i])));
                    assert_eq!(r.eval(&f, &[s, t]), g.eval(&f, &x));
                    assert_eq!(c.eval(&f, &x), g.eval(&f, &x));
                }
            }
        }
    }
}
