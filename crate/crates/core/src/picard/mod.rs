//! The Picard lattice `Z^{1,6}` of a cubic surface and the Weyl group `W(E6)`.
//!
//! Line classes are indexed `E1..E6` (0..6), `F12, F13, .., F56` (6..21) and
//! `G1..G6` (21..27). Lattice vectors use the basis `L, E1, .., E6`.

mod schlafli;
pub mod snf;

use std::collections::HashMap;
use std::sync::OnceLock;

use serde::Serialize;

pub use schlafli::{frobenius_element, schlafli_label, surface_h1, weil_prediction, Labeling};
use snf::{identity, mat_mul, row_echelon, smith_diagonal, IMat};

pub const CLASS_COUNT: usize = 27;
pub const WEYL_ORDER: usize = 51840;

pub type LatticeVector = [i64; 7];

/// `F_ij` class indices in order.
fn f_pairs() -> Vec<(usize, usize)> {
    (0..6)
        .flat_map(|i| (i + 1..6).map(move |j| (i, j)))
        .collect()
}

pub fn f_index(i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    6 + f_pairs()
        .iter()
        .position(|&p| p == (i, j))
        .expect("distinct indices below 6")
}

pub fn class_name(c: usize) -> String {
    match c {
        0..=5 => format!("E{}", c + 1),
        6..=20 => {
            let (i, j) = f_pairs()[c - 6];
            format!("F{}{}", i + 1, j + 1)
        }
        _ => format!("G{}", c - 20),
    }
}

pub fn class_vector(c: usize) -> LatticeVector {
    let mut v = [0i64; 7];
    match c {
        0..=5 => v[c + 1] = 1,
        6..=20 => {
            let (i, j) = f_pairs()[c - 6];
            v[0] = 1;
            v[i + 1] = -1;
            v[j + 1] = -1;
        }
        _ => {
            v[0] = 2;
            for k in 0..6 {
                if k != c - 21 {
                    v[k + 1] = -1;
                }
            }
        }
    }
    v
}

pub fn pairing(a: &LatticeVector, b: &LatticeVector) -> i64 {
    a[0] * b[0] - (1..7).map(|i| a[i] * b[i]).sum::<i64>()
}

pub fn anticanonical() -> LatticeVector {
    [3, -1, -1, -1, -1, -1, -1]
}

fn class_lookup() -> &'static HashMap<LatticeVector, usize> {
    static T: OnceLock<HashMap<LatticeVector, usize>> = OnceLock::new();
    T.get_or_init(|| (0..CLASS_COUNT).map(|c| (class_vector(c), c)).collect())
}

/// A permutation of the 27 line classes preserving their intersection pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement {
    pub perm: [u8; CLASS_COUNT],
}

impl WeylElement {
    pub fn identity() -> WeylElement {
        WeylElement {
            perm: std::array::from_fn(|i| i as u8),
        }
    }

    /// The permutation induced by an integer matrix, if it permutes the classes.
    pub fn from_matrix(m: &IMat) -> Option<WeylElement> {
        let mut perm = [0u8; CLASS_COUNT];
        for (c, slot) in perm.iter_mut().enumerate() {
            let v = class_vector(c);
            let w: LatticeVector =
                std::array::from_fn(|i| (0..7).map(|j| m[i][j] as i64 * v[j]).sum());
            *slot = *class_lookup().get(&w)? as u8;
        }
        Some(WeylElement { perm })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        WeylElement {
            perm: std::array::from_fn(|i| self.perm[other.perm[i] as usize]),
        }
    }

    pub fn inverse(&self) -> WeylElement {
        let mut perm = [0u8; CLASS_COUNT];
        for (i, &p) in self.perm.iter().enumerate() {
            perm[p as usize] = i as u8;
        }
        WeylElement { perm }
    }

    pub fn power(&self, k: u32) -> WeylElement {
        (0..k).fold(WeylElement::identity(), |acc, _| acc.compose(self))
    }

    pub fn apply(&self, c: usize) -> usize {
        self.perm[c] as usize
    }

    /// Matrix on the basis `L, E1..E6`, using `L = F12 + E1 + E2`.
    pub fn matrix(&self) -> IMat {
        let img = |c: usize| class_vector(self.apply(c));
        let (f, e1, e2) = (img(f_index(0, 1)), img(0), img(1));
        let mut cols: Vec<LatticeVector> = vec![std::array::from_fn(|i| f[i] + e1[i] + e2[i])];
        cols.extend((0..6).map(img));
        (0..7)
            .map(|i| (0..7).map(|j| cols[j][i] as i128).collect())
            .collect()
    }

    pub fn trace(&self) -> i64 {
        let m = self.matrix();
        (0..7).map(|i| m[i][i] as i64).sum()
    }

    pub fn order(&self) -> usize {
        let mut x = *self;
        let mut n = 1;
        while x != WeylElement::identity() {
            x = x.compose(self);
            n += 1;
        }
        n
    }

    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = [false; CLASS_COUNT];
        let mut v = Vec::new();
        for i in 0..CLASS_COUNT {
            let mut len = 0;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                len += 1;
                j = self.apply(j);
            }
            if len > 0 {
                v.push(len);
            }
        }
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    /// Intersection numbers of all class pairs are unchanged.
    pub fn preserves_incidence(&self) -> bool {
        (0..CLASS_COUNT).all(|a| {
            (0..CLASS_COUNT).all(|b| {
                pairing(&class_vector(a), &class_vector(b))
                    == pairing(&class_vector(self.apply(a)), &class_vector(self.apply(b)))
            })
        })
    }
}

/// Finite abelian group given by invariant factors `d1 | d2 | ...`, all `> 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyResult {
    pub invariant_factors: Vec<u64>,
    pub order: u64,
}

impl CohomologyResult {
    fn from_factors(mut invariant_factors: Vec<u64>) -> CohomologyResult {
        invariant_factors.retain(|&d| d > 1);
        let order = invariant_factors.iter().product();
        CohomologyResult {
            invariant_factors,
            order,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_square(&self) -> bool {
        let r = (self.order as f64).sqrt().round() as u64;
        r * r == self.order
    }
}

impl std::fmt::Display for CohomologyResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.invariant_factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// `H^1(<A>, Z^7)` for an integer matrix of finite order: `ker(N) / im(A - I)`
/// with `N = I + A + .. + A^(n-1)`.
pub fn h1_cyclic_matrix(a: &IMat) -> CohomologyResult {
    let id = identity(7);
    let mut norm = id.clone();
    let mut pw = a.clone();
    while pw != id {
        for i in 0..7 {
            for j in 0..7 {
                norm[i][j] += pw[i][j];
            }
        }
        pw = mat_mul(&pw, a);
    }
    // rows r.. of u span ker(norm) as row vectors of norm^T; coordinates come from u^-1
    let mut t = snf::transpose(&norm);
    let (_, uinv, r) = row_echelon(&mut t);
    let d = 7 - r;
    let a_minus: IMat = (0..7)
        .map(|i| (0..7).map(|j| a[i][j] - id[i][j]).collect())
        .collect();
    let mut coords: IMat = vec![vec![0; 7]; d];
    for col in 0..7 {
        for k in 0..d {
            coords[k][col] = (0..7).map(|i| a_minus[i][col] * uinv[i][r + k]).sum();
        }
    }
    let diag = smith_diagonal(&coords);
    debug_assert!(
        diag.iter().all(|&x| x != 0),
        "H^1 of a finite group is finite"
    );
    CohomologyResult::from_factors(diag.into_iter().map(|x| x as u64).collect())
}

pub fn h1_cyclic(a: &WeylElement) -> CohomologyResult {
    h1_cyclic_matrix(&a.matrix())
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjClassRecord {
    /// Position in the artifact's class order, starting at 1.
    pub index: usize,
    pub order: usize,
    pub trace: i64,
    pub cycle_type: Vec<usize>,
    pub size: usize,
    pub h1: CohomologyResult,
    #[serde(skip)]
    pub representative: WeylElement,
}

pub struct WeylGroup {
    pub elements: Vec<WeylElement>,
    index: HashMap<WeylElement, usize>,
    pub classes: Vec<ConjClassRecord>,
    class_of: Vec<u8>,
}

/// The five index transpositions and the reflection in `L - E1 - E2 - E3`.
pub fn generators() -> Vec<WeylElement> {
    let mut gens = Vec::new();
    for i in 1..6 {
        let mut m = identity(7);
        m.swap(i, i + 1);
        gens.push(WeylElement::from_matrix(&m).expect("index swaps permute classes"));
    }
    let r: LatticeVector = [1, -1, -1, -1, 0, 0, 0];
    let refl: IMat = (0..7)
        .map(|i| {
            (0..7)
                .map(|j| {
                    let mut e = [0i64; 7];
                    e[j] = 1;
                    ((i == j) as i64 + pairing(&e, &r) * r[i]) as i128
                })
                .collect()
        })
        .collect();
    gens.push(WeylElement::from_matrix(&refl).expect("a root reflection permutes classes"));
    gens
}

impl WeylGroup {
    pub fn generate() -> WeylGroup {
        let gens = generators();
        let mut elements = vec![WeylElement::identity()];
        let mut index = HashMap::from([(WeylElement::identity(), 0)]);
        let mut head = 0;
        while head < elements.len() {
            let x = elements[head];
            head += 1;
            for g in &gens {
                let y = g.compose(&x);
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(y) {
                    e.insert(elements.len());
                    elements.push(y);
                }
            }
        }
        let mut class_of = vec![u8::MAX; elements.len()];
        let mut raw: Vec<Vec<usize>> = Vec::new();
        for start in 0..elements.len() {
            if class_of[start] != u8::MAX {
                continue;
            }
            let id = raw.len() as u8;
            class_of[start] = id;
            let mut members = vec![start];
            let mut h = 0;
            while h < members.len() {
                let x = elements[members[h]];
                h += 1;
                for g in &gens {
                    // generators are involutions
                    let y = index[&g.compose(&x).compose(g)];
                    if class_of[y] == u8::MAX {
                        class_of[y] = id;
                        members.push(y);
                    }
                }
            }
            raw.push(members);
        }
        let mut classes: Vec<(ConjClassRecord, u8)> = raw
            .iter()
            .enumerate()
            .map(|(id, members)| {
                let rep = members.iter().map(|&i| elements[i]).min().unwrap();
                let rec = ConjClassRecord {
                    index: 0,
                    order: rep.order(),
                    trace: rep.trace(),
                    cycle_type: rep.cycle_type(),
                    size: members.len(),
                    h1: h1_cyclic(&rep),
                    representative: rep,
                };
                (rec, id as u8)
            })
            .collect();
        classes.sort_by(|(a, _), (b, _)| {
            (a.order, a.trace, &a.cycle_type, a.size, a.representative).cmp(&(
                b.order,
                b.trace,
                &b.cycle_type,
                b.size,
                b.representative,
            ))
        });
        let mut relabel = vec![0u8; classes.len()];
        for (pos, (rec, id)) in classes.iter_mut().enumerate() {
            rec.index = pos + 1;
            relabel[*id as usize] = pos as u8;
        }
        let class_of = class_of.into_iter().map(|c| relabel[c as usize]).collect();
        WeylGroup {
            elements,
            index,
            classes: classes.into_iter().map(|(r, _)| r).collect(),
            class_of,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: &WeylElement) -> bool {
        self.index.contains_key(x)
    }

    /// The record of the class containing `x`.
    pub fn class_of(&self, x: &WeylElement) -> Option<&ConjClassRecord> {
        self.index
            .get(x)
            .map(|&i| &self.classes[self.class_of[i] as usize])
    }
}

/// The group, generated once per process.
pub fn weyl_group() -> &'static WeylGroup {
    static G: OnceLock<WeylGroup> = OnceLock::new();
    G.get_or_init(WeylGroup::generate)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Torsion of `Z^7 / im(A - I)`; equals `H^1` since `ker N` is the saturation of `im(A - I)`.
    fn h1_by_cokernel(a: &IMat) -> CohomologyResult {
        let m: IMat = (0..7)
            .map(|i| (0..7).map(|j| a[i][j] - (i == j) as i128).collect())
            .collect();
        CohomologyResult::from_factors(
            smith_diagonal(&m)
                .into_iter()
                .filter(|&x| x != 0)
                .map(|x| x as u64)
                .collect(),
        )
    }

    #[test]
    fn lattice_classes() {
        let k = anticanonical();
        for c in 0..CLASS_COUNT {
            let v = class_vector(c);
            assert_eq!(pairing(&v, &v), -1, "{}", class_name(c));
            assert_eq!(pairing(&v, &k), 1);
        }
        assert_eq!(pairing(&class_vector(0), &class_vector(f_index(0, 1))), 1);
        assert_eq!(pairing(&class_vector(0), &class_vector(21)), 0);
        assert_eq!(pairing(&class_vector(0), &class_vector(22)), 1);
        assert_eq!(class_name(f_index(4, 5)), "F56");
    }

    #[test]
    fn group_and_classes() {
        let g = weyl_group();
        assert_eq!(g.order(), WEYL_ORDER);
        assert_eq!(g.classes.len(), 25);
        assert_eq!(g.classes.iter().map(|c| c.size).sum::<usize>(), WEYL_ORDER);
        let id = &g.classes[0];
        assert_eq!((id.order, id.trace, id.size), (1, 7, 1));
        assert!(id.h1.is_trivial());
        let form: IMat = (0..7)
            .map(|i| {
                (0..7)
                    .map(|j| {
                        if i != j {
                            0
                        } else if i == 0 {
                            1
                        } else {
                            -1
                        }
                    })
                    .collect()
            })
            .collect();
        let k: Vec<i128> = anticanonical().iter().map(|&x| x as i128).collect();
        for x in &g.elements {
            let m = x.matrix();
            assert_eq!(mat_mul(&mat_mul(&snf::transpose(&m), &form), &m), form);
            let mk: Vec<i128> = (0..7)
                .map(|i| (0..7).map(|j| m[i][j] * k[j]).sum())
                .collect();
            assert_eq!(mk, k);
            assert_eq!(WeylElement::from_matrix(&m), Some(*x));
        }
        for x in g.elements.iter().step_by(97) {
            assert!(x.preserves_incidence());
            assert_eq!(g.class_of(x).unwrap().h1, h1_cyclic(x));
        }
    }

    #[test]
    fn h1_table() {
        let g = weyl_group();
        let mut orders = std::collections::BTreeSet::new();
        for c in &g.classes {
            assert_eq!(
                c.h1,
                h1_by_cokernel(&c.representative.matrix()),
                "class {}",
                c.index
            );
            assert!(c.h1.is_square());
            assert!(
                matches!(c.h1.invariant_factors.as_slice(), [] | [2, 2] | [3, 3]),
                "{}",
                c.h1
            );
            orders.insert(c.h1.order);
        }
        assert_eq!(orders.into_iter().collect::<Vec<_>>(), vec![1, 4, 9]);
    }
}
