//! Identifying 27 concrete lines with the lattice classes.

use super::{
    class_vector, h1_cyclic, pairing, weyl_group, CohomologyResult, WeylElement, CLASS_COUNT,
};
use crate::error::{Error, Result};

/// A bijection between line indices and classes `E_i, F_ij, G_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeling {
    pub class_to_line: [usize; CLASS_COUNT],
    pub line_to_class: [usize; CLASS_COUNT],
}

impl Labeling {
    fn from_classes(class_to_line: [usize; CLASS_COUNT]) -> Labeling {
        let mut line_to_class = [0; CLASS_COUNT];
        for (c, &l) in class_to_line.iter().enumerate() {
            line_to_class[l] = c;
        }
        Labeling {
            class_to_line,
            line_to_class,
        }
    }

    /// Lines meet exactly when their classes pair to 1.
    pub fn matches(&self, incidence: &[Vec<bool>]) -> bool {
        (0..CLASS_COUNT).all(|a| {
            (0..CLASS_COUNT).all(|b| {
                a == b
                    || incidence[self.class_to_line[a]][self.class_to_line[b]]
                        == (pairing(&class_vector(a), &class_vector(b)) == 1)
            })
        })
    }

    /// The labeling obtained by renaming classes through `w`.
    pub fn twist(&self, w: &WeylElement) -> Labeling {
        Labeling::from_classes(std::array::from_fn(|c| self.class_to_line[w.apply(c)]))
    }
}

fn try_six(incidence: &[Vec<bool>], six: &[usize]) -> Option<Labeling> {
    let n = incidence.len();
    let meets = |l: usize| -> Vec<usize> { (0..6).filter(|&i| incidence[l][six[i]]).collect() };
    let mut class_to_line = [usize::MAX; CLASS_COUNT];
    for (i, &l) in six.iter().enumerate() {
        class_to_line[i] = l;
    }
    for l in (0..n).filter(|l| !six.contains(l)) {
        let m = meets(l);
        let c = match m.len() {
            2 => super::f_index(m[0], m[1]),
            5 => 21 + (0..6).find(|i| !m.contains(i)).unwrap(),
            _ => return None,
        };
        if class_to_line[c] != usize::MAX {
            return None;
        }
        class_to_line[c] = l;
    }
    let lab = Labeling::from_classes(class_to_line);
    lab.matches(incidence).then_some(lab)
}

/// The first six of pairwise skew lines, in index order, that extends to a
/// consistent labeling.
pub fn schlafli_label(incidence: &[Vec<bool>]) -> Result<Labeling> {
    if incidence.len() != CLASS_COUNT {
        return Err(Error::Configuration(format!("{} lines", incidence.len())));
    }
    fn extend(inc: &[Vec<bool>], six: &mut Vec<usize>, from: usize) -> Option<Labeling> {
        if six.len() == 6 {
            return try_six(inc, six);
        }
        for l in from..CLASS_COUNT {
            if six.iter().all(|&m| !inc[l][m]) {
                six.push(l);
                if let Some(lab) = extend(inc, six, l + 1) {
                    return Some(lab);
                }
                six.pop();
            }
        }
        None
    }
    extend(incidence, &mut Vec::new(), 0)
        .ok_or_else(|| Error::Configuration("no consistent Schläfli labeling".into()))
}

/// Frobenius on the line classes, transported through `lab`.
pub fn frobenius_element(frobenius: &[usize], lab: &Labeling) -> Result<WeylElement> {
    let perm = std::array::from_fn(|c| lab.line_to_class[frobenius[lab.class_to_line[c]]] as u8);
    let w = WeylElement { perm };
    if !weyl_group().contains(&w) {
        return Err(Error::Configuration(
            "Frobenius does not act through W(E6)".into(),
        ));
    }
    Ok(w)
}

/// `q^{2k} + q^k Tr((F*)^k) + 1`.
pub fn weil_prediction(q: u64, k: u32, frob: &WeylElement) -> i128 {
    let qk = (q as i128).pow(k);
    qk * qk + qk * frob.power(k).trace() as i128 + 1
}

/// `H^1` of the Galois group of `F_{q^m}` acting on the lattice.
pub fn surface_h1(frob: &WeylElement, m: u32) -> CohomologyResult {
    h1_cyclic(&frob.power(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lines::find_lines;
    use rand::{Rng, SeedableRng};

    fn standard_incidence() -> Vec<Vec<bool>> {
        (0..CLASS_COUNT)
            .map(|a| {
                (0..CLASS_COUNT)
                    .map(|b| a != b && pairing(&class_vector(a), &class_vector(b)) == 1)
                    .collect()
            })
            .collect()
    }

    #[test]
    fn labels_the_abstract_configuration() {
        let inc = standard_incidence();
        let lab = schlafli_label(&inc).unwrap();
        assert!(lab.matches(&inc));
        let g = weyl_group();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let w = g.elements[rng.gen_range(0..g.order())];
            assert!(lab.twist(&w).matches(&inc));
        }
    }

    #[test]
    fn fixture_traces_match_point_counts() {
        for (s, tr) in [
            (fixtures::minimal_f2(), -2),
            (fixtures::rational_f2(), -1),
            (fixtures::diagonal_f4(false), -2),
        ] {
            let cfg = find_lines(&s).unwrap();
            let lab = schlafli_label(&cfg.incidence).unwrap();
            assert!(lab.matches(&cfg.incidence));
            for i in 0..6 {
                for j in 0..6 {
                    assert!(i == j || !cfg.incidence[lab.class_to_line[i]][lab.class_to_line[j]]);
                }
            }
            let fr = frobenius_element(&cfg.frobenius, &lab).unwrap();
            assert_eq!(fr.trace(), tr);
            for k in 1..=2 {
                let n = s.surface_points(k).unwrap().len() as i128;
                assert_eq!(weil_prediction(s.q(), k, &fr), n);
            }
            let cls = weyl_group().class_of(&fr).unwrap();
            assert_eq!(cls.h1, surface_h1(&fr, 1));
            assert!(surface_h1(&fr, fr.order() as u32).is_trivial());
        }
    }
}
