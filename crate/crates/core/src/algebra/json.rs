use serde::{Deserialize, Serialize};

use super::{AlgebraSpec, Decomposition, FactorBlock};
use crate::error::{Error, Result};
use crate::gfield::gf;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorDoc {
    pub n: usize,
    pub m: usize,
    pub basis: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionDoc {
    pub factors: Vec<FactorDoc>,
    pub radical_basis: Vec<Vec<u32>>,
    pub radical_powers: Vec<Vec<Vec<u32>>>,
}

/// Canonical JSON form of an [`AlgebraSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub label: String,
    pub q: u64,
    pub dimension: usize,
    /// Nonzero structure constants `[i, j, l, c]`, sorted.
    pub tensor: Vec<(usize, usize, usize, u32)>,
    pub unity: Vec<u32>,
    pub decomposition: Option<DecompositionDoc>,
}

impl AlgebraSpec {
    pub fn to_doc(&self) -> AlgebraDoc {
        AlgebraDoc {
            label: self.label.clone(),
            q: self.q(),
            dimension: self.dim,
            tensor: self.constants(),
            unity: self.one.clone(),
            decomposition: self.meta.as_ref().map(|m| DecompositionDoc {
                factors: m
                    .factors
                    .iter()
                    .map(|f| FactorDoc {
                        n: f.n,
                        m: f.m,
                        basis: f.basis.clone(),
                    })
                    .collect(),
                radical_basis: m.radical_basis.clone(),
                radical_powers: m.radical_powers.clone(),
            }),
        }
    }

    pub fn from_doc(doc: &AlgebraDoc) -> Result<AlgebraSpec> {
        let field = gf(doc.q)?;
        let meta = doc.decomposition.as_ref().map(|d| Decomposition {
            factors: d
                .factors
                .iter()
                .map(|f| FactorBlock {
                    n: f.n,
                    m: f.m,
                    basis: f.basis.clone(),
                })
                .collect(),
            radical_basis: d.radical_basis.clone(),
            radical_powers: d.radical_powers.clone(),
        });
        let spec = AlgebraSpec::new(field, doc.dimension, &doc.tensor, doc.unity.clone(), meta)?;
        if let Err((i, j, l)) = spec.check_associativity() {
            return Err(Error::invalid(format!(
                "not associative on basis triple ({i},{j},{l})"
            )));
        }
        Ok(spec.with_label(doc.label.clone()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("algebra document serialises")
    }

    pub fn from_json(s: &str) -> Result<AlgebraSpec> {
        let doc: AlgebraDoc = serde_json::from_str(s)
            .map_err(|e| Error::invalid(format!("bad algebra JSON: {e}")))?;
        Self::from_doc(&doc)
    }
}

#[cfg(test)]
mod tests {
    use crate::algebra::{parabolic, AlgebraSpec};

    #[test]
    fn json_round_trip() {
        let p = parabolic(&[2, 1], 1, 3).unwrap();
        let back = AlgebraSpec::from_json(&p.to_json()).unwrap();
        assert_eq!(back.to_doc(), p.to_doc());
    }
}
