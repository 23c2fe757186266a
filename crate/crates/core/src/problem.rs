//! Plain-text problem files with keyword sections, one item per line:
//!
//! ```text
//! FIELD
//! GF(2147483647)
//! VARS
//! x
//! y
//! DIM
//! 1
//! GENS
//! x^2+y^2-1
//! OBJECTIVE
//! x^3+2*y^3
//! DELTA
//! 2
//! 2
//! ```
//!
//! `#` starts a comment. `FIELD` accepts `QQ`, `rationals`, `GF(p)` or
//! `prime p`; several variables may share a line when separated by spaces
//! or commas.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bounds::DeltaVector;
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::parse::parse_poly;
use crate::polar::VarietySpec;
use crate::poly::{MultiPoly, Ring};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub field: Option<FieldSpec>,
    pub vars: Vec<String>,
    pub dim: Option<usize>,
    pub gens: Vec<String>,
    pub objective: Option<String>,
    pub delta: Option<Vec<u128>>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Field,
    Vars,
    Dim,
    Gens,
    Objective,
    Delta,
}

fn format_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Format(format!("line {line}: {msg}"))
}

/// Parses a field description.
pub fn parse_field_spec(text: &str) -> Result<FieldSpec> {
    let t = text.trim();
    let lower = t.to_ascii_lowercase();
    if matches!(lower.as_str(), "qq" | "q" | "rationals") {
        return Ok(FieldSpec::Rationals);
    }
    let digits = if let Some(inner) = lower.strip_prefix("gf(").and_then(|s| s.strip_suffix(')')) {
        inner.trim()
    } else if let Some(rest) = lower.strip_prefix("prime") {
        rest.trim()
    } else {
        lower.as_str()
    };
    let p: u64 = digits
        .parse()
        .map_err(|_| Error::Field(format!("unrecognized field {t:?}")))?;
    FieldSpec::prime(p)
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = ProblemFile::default();
        let mut section = None;
        let mut seen = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let keyword = match line {
                "FIELD" => Some(Section::Field),
                "VARS" => Some(Section::Vars),
                "DIM" => Some(Section::Dim),
                "GENS" => Some(Section::Gens),
                "OBJECTIVE" => Some(Section::Objective),
                "DELTA" => Some(Section::Delta),
                _ => None,
            };
            if let Some(s) = keyword {
                if seen.contains(&s) {
                    return Err(format_err(line_no, format!("section {line} repeated")));
                }
                seen.push(s);
                section = Some(s);
                continue;
            }
            match section {
                None => return Err(format_err(line_no, "content before the first section keyword")),
                Some(Section::Field) => {
                    if out.field.is_some() {
                        return Err(format_err(line_no, "FIELD takes a single line"));
                    }
                    out.field = Some(parse_field_spec(line).map_err(|e| format_err(line_no, e))?);
                }
                Some(Section::Vars) => out.vars.extend(
                    line.split(|c: char| c == ',' || c.is_whitespace())
                        .filter(|s| !s.is_empty())
                        .map(str::to_string),
                ),
                Some(Section::Dim) => {
                    if out.dim.is_some() {
                        return Err(format_err(line_no, "DIM takes a single line"));
                    }
                    out.dim = Some(line.parse().map_err(|_| format_err(line_no, "DIM must be a nonnegative integer"))?);
                }
                Some(Section::Gens) => out.gens.push(line.to_string()),
                Some(Section::Objective) => {
                    if out.objective.is_some() {
                        return Err(format_err(line_no, "OBJECTIVE takes a single line"));
                    }
                    out.objective = Some(line.to_string());
                }
                Some(Section::Delta) => {
                    let values = out.delta.get_or_insert_with(Vec::new);
                    for item in line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()) {
                        values.push(item.parse().map_err(|_| format_err(line_no, format!("bad polar degree {item:?}")))?);
                    }
                }
            }
        }
        let mut distinct = out.vars.clone();
        distinct.sort();
        distinct.dedup();
        if distinct.len() != out.vars.len() {
            return Err(Error::Format("variables must be distinct".into()));
        }
        if let Some(d) = out.dim {
            if !out.vars.is_empty() && d >= out.vars.len() {
                return Err(Error::Format(format!(
                    "DIM {d} must be below the number of variables {}",
                    out.vars.len()
                )));
            }
        }
        Ok(out)
    }

    pub fn delta_vector(&self) -> Result<Option<DeltaVector>> {
        self.delta.clone().map(DeltaVector::new).transpose()
    }

    /// Ring, variety and objective over `field`.
    pub fn instantiate<F: Field>(&self, field: F) -> Result<Problem<F>> {
        if self.vars.is_empty() {
            return Err(Error::Format("missing VARS section".into()));
        }
        if self.gens.is_empty() {
            return Err(Error::Format("missing GENS section".into()));
        }
        let dim = self.dim.ok_or_else(|| Error::Format("missing DIM section".into()))?;
        let ring = Ring::new(field, &self.vars)?;
        let gens = self
            .gens
            .iter()
            .map(|g| parse_poly(g, &ring))
            .collect::<Result<Vec<_>>>()?;
        let objective = self.objective.as_deref().map(|g| parse_poly(g, &ring)).transpose()?;
        Ok(Problem {
            variety: VarietySpec::new(gens, dim)?,
            objective,
            ring,
        })
    }
}

/// A parsed problem over a concrete field.
#[derive(Clone, Debug)]
pub struct Problem<F: Field> {
    pub ring: Arc<Ring<F>>,
    pub variety: VarietySpec<F>,
    pub objective: Option<MultiPoly<F>>,
}

impl<F: Field> Problem<F> {
    pub fn objective(&self) -> Result<&MultiPoly<F>> {
        self.objective
            .as_ref()
            .ok_or_else(|| Error::Format("missing OBJECTIVE section".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    const CIRCLE: &str = "# unit circle\nFIELD\nQQ\nVARS\nx, y\nDIM\n1\nGENS\nx^2+y^2-1\nOBJECTIVE\nx^3+2*y^3\nDELTA\n2 2\n";

    #[test]
    fn circle_file() {
        let p = ProblemFile::parse(CIRCLE).unwrap();
        assert_eq!(p.field, Some(FieldSpec::Rationals));
        assert_eq!(p.vars, vec!["x", "y"]);
        assert_eq!(p.dim, Some(1));
        assert_eq!(p.delta, Some(vec![2, 2]));
        let inst = p.instantiate(Rationals).unwrap();
        assert_eq!(inst.variety.generators()[0].to_string(), "x^2 + y^2 - 1");
        assert_eq!(inst.objective().unwrap().to_string(), "x^3 + 2*y^3");
    }

    #[test]
    fn field_specs() {
        assert_eq!(parse_field_spec("GF(7)").unwrap(), FieldSpec::Prime { modulus: 7 });
        assert_eq!(parse_field_spec("prime 2147483647").unwrap(), FieldSpec::Prime { modulus: 2147483647 });
        assert_eq!(parse_field_spec("rationals").unwrap(), FieldSpec::Rationals);
        assert!(parse_field_spec("GF(8)").is_err());
        assert!(parse_field_spec("reals").is_err());
    }

    #[test]
    fn malformed_files() {
        assert!(matches!(ProblemFile::parse("x^2"), Err(Error::Format(_))));
        assert!(ProblemFile::parse("VARS\nx x\n").is_err());
        assert!(ProblemFile::parse("VARS\nx\nDIM\n1\n").is_err());
        assert!(ProblemFile::parse("DIM\nthree\n").is_err());
        assert!(ProblemFile::parse("DIM\n1\nDIM\n1\n").is_err());
        let missing = ProblemFile::parse("VARS\nx y\nDIM\n1\n").unwrap();
        assert!(missing.instantiate(PrimeField::default()).is_err());
        let bad_var = ProblemFile::parse("VARS\nx y\nDIM\n1\nGENS\nx+z\n").unwrap();
        assert!(matches!(bad_var.instantiate(Rationals), Err(Error::UnknownVariable(_))));
    }
}
