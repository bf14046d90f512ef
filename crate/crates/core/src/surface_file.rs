//! TOML surface descriptions.
//!
//! ```toml
//! kind = "cubic"          # or "dp4"
//! p = 2
//! r = 2
//! gen_poly = [1, 1, 1]    # omitted when r = 1
//!
//! [[coeffs]]
//! exps = [0, 0, 0, 3]
//! value = [0, 1]          # F_p-coefficients in the generator, ascending
//! ```
//!
//! A dP4 file carries its second quadric in `[[coeffs2]]` records.

use serde::{Deserialize, Serialize};

use crate::cubic::{CubicSurface, Term};
use crate::dp4::Dp4Surface;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Record {
    pub exps: Vec<u8>,
    pub value: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceFile {
    pub kind: String,
    pub p: u32,
    #[serde(default = "one")]
    pub r: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gen_poly: Option<Vec<u32>>,
    #[serde(default)]
    pub coeffs: Vec<Record>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coeffs2: Vec<Record>,
}

fn one() -> u32 {
    1
}

#[derive(Debug)]
pub enum Surface {
    Cubic(CubicSurface),
    Dp4(Dp4Surface),
}

impl Surface {
    pub fn with_cap(self, cap: u64) -> Surface {
        match self {
            Surface::Cubic(s) => Surface::Cubic(s.with_cap(cap)),
            Surface::Dp4(s) => Surface::Dp4(s.with_cap(cap)),
        }
    }
}

fn terms(records: &[Record]) -> Vec<Term> {
    records
        .iter()
        .map(|r| (r.exps.clone(), r.value.clone()))
        .collect()
}

fn relabel(block: &str, e: Error) -> Error {
    match e {
        Error::Malformed(m) => Error::Malformed(format!("{block} {m}")),
        other => Error::Malformed(other.to_string()),
    }
}

impl SurfaceFile {
    pub fn parse(text: &str) -> Result<SurfaceFile> {
        toml::from_str(text).map_err(|e| Error::Malformed(e.message().to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("surface files serialize")
    }

    pub fn from_terms(
        kind: &str,
        p: u32,
        r: u32,
        gen_poly: Option<Vec<u32>>,
        blocks: [&[Term]; 2],
    ) -> SurfaceFile {
        let rec = |t: &[Term]| {
            t.iter()
                .map(|(e, v)| Record {
                    exps: e.clone(),
                    value: v.clone(),
                })
                .collect()
        };
        SurfaceFile {
            kind: kind.into(),
            p,
            r,
            gen_poly,
            coeffs: rec(blocks[0]),
            coeffs2: rec(blocks[1]),
        }
    }

    pub fn into_surface(&self) -> Result<Surface> {
        let gen = self.gen_poly.clone().unwrap_or_default();
        if self.r > 1 && self.gen_poly.is_none() {
            return Err(Error::Malformed("gen_poly is required when r > 1".into()));
        }
        match self.kind.as_str() {
            "cubic" => {
                if !self.coeffs2.is_empty() {
                    return Err(Error::Malformed(
                        "coeffs2 is only valid for kind = \"dp4\"".into(),
                    ));
                }
                CubicSurface::new(self.p, self.r, &gen, terms(&self.coeffs))
                    .map(Surface::Cubic)
                    .map_err(|e| relabel("coeffs", e))
            }
            "dp4" => {
                crate::cubic::check_terms(self.p, self.r, 5, 2, &terms(&self.coeffs))
                    .map_err(|e| relabel("coeffs", e))?;
                crate::cubic::check_terms(self.p, self.r, 5, 2, &terms(&self.coeffs2))
                    .map_err(|e| relabel("coeffs2", e))?;
                Dp4Surface::new(
                    self.p,
                    self.r,
                    &gen,
                    [terms(&self.coeffs), terms(&self.coeffs2)],
                )
                .map(Surface::Dp4)
                .map_err(|e| relabel("surface", e))
            }
            other => Err(Error::Malformed(format!("unknown kind {other:?}"))),
        }
    }
}

/// Parses and validates a surface description in one step.
pub fn load(text: &str) -> Result<Surface> {
    SurfaceFile::parse(text)?.into_surface()
}

pub fn load_cubic(text: &str) -> Result<CubicSurface> {
    match load(text)? {
        Surface::Cubic(s) => Ok(s),
        Surface::Dp4(_) => Err(Error::Malformed("expected a cubic surface".into())),
    }
}

pub fn load_dp4(text: &str) -> Result<Dp4Surface> {
    match load(text)? {
        Surface::Dp4(s) => Ok(s),
        Surface::Cubic(_) => Err(Error::Malformed("expected a dp4 surface".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn malformed_records_name_their_index() {
        let text = "kind = \"cubic\"\np = 2\n[[coeffs]]\nexps = [3, 0, 0, 0]\nvalue = [1]\n[[coeffs]]\nexps = [2, 0, 0]\nvalue = [1]\n";
        let err = load(text).unwrap_err();
        assert!(
            matches!(&err, Error::Malformed(m) if m.contains("record 1")),
            "{err}"
        );
        let err = load("kind = \"cubic\"\np = 2\n[[coeffs]]\nexps = [3, 0, 0, 0]\nvalue = [2]\n")
            .unwrap_err();
        assert!(
            matches!(&err, Error::Malformed(m) if m.contains("record 0")),
            "{err}"
        );
        assert!(matches!(
            load("kind = \"quartic\"\np = 2\n"),
            Err(Error::Malformed(_))
        ));
        assert!(matches!(load("kind = 3"), Err(Error::Malformed(_))));
        assert!(matches!(
            load("kind = \"cubic\"\np = 2\nr = 2\n"),
            Err(Error::Malformed(_))
        ));
    }

    #[test]
    fn roundtrip() {
        let f = SurfaceFile::parse(crate::fixtures::DIAGONAL_F4_A).unwrap();
        let back = SurfaceFile::parse(&f.to_toml()).unwrap();
        assert_eq!(f, back);
    }
}
