//! Serialized form of a corpus document.
//!
//! Every entity carries a `name`; references between entities are by name
//! and are resolved in [`crate::corpus`]. Optional collections are omitted
//! when empty so that re-serialized documents stay close to hand-written
//! ones.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusDocument {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub terms: Vec<TermDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub algebras: Vec<AlgebraDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub chains: Vec<ChainDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub homs: Vec<HomDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub squares: Vec<SquareDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coarsenings: Vec<CoarseningDecl>,
}

/// A term in prefix syntax, e.g. `(mul (mul x0 (inv x1)) x2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDecl {
    pub name: String,
    pub term: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDecl {
    pub name: String,
    pub size: usize,
    pub operations: Vec<OperationDecl>,
    #[serde(default, skip_serializing_if = "CertificateDecl::is_empty")]
    pub certificates: CertificateDecl,
    /// Law names whose failure is anticipated.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub expect_fail: Vec<String>,
}

/// Row-major table: the entry for `(a₁,…,aₖ)` sits at `Σ aᵢ·size^(k-i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperationDecl {
    pub symbol: String,
    pub arity: usize,
    pub table: Vec<usize>,
}

/// Names of declared terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDecl {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub malcev: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub majority: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub day: Option<Vec<String>>,
}

impl CertificateDecl {
    pub fn is_empty(&self) -> bool {
        self.malcev.is_none() && self.majority.is_none() && self.day.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ChainDecl {
    /// Congruences mod `moduli[k]` on the integers, stationary past the end.
    Moduli { name: String, moduli: Vec<u64> },
    /// `base^k` on the integers.
    Powers { name: String, base: u64 },
    /// Declared algebras as levels, coarsest first; `connect[k]` maps level
    /// `k+1` onto level `k`.
    Tables { name: String, levels: Vec<String>, connect: Vec<Vec<usize>> },
}

impl ChainDecl {
    pub fn name(&self) -> &str {
        match self {
            ChainDecl::Moduli { name, .. } | ChainDecl::Powers { name, .. } | ChainDecl::Tables { name, .. } => name,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum HomDecl {
    /// `x ↦ factor·x` between integer chains.
    Scale {
        name: String,
        source: String,
        target: String,
        factor: u64,
        #[serde(default, skip_serializing_if = "ReindexDecl::is_identity")]
        reindex: ReindexDecl,
    },
    /// `tables[k]` maps source level `σ(k)` to target level `k`; the last
    /// table repeats.
    Tables {
        name: String,
        source: String,
        target: String,
        tables: Vec<Vec<u64>>,
        #[serde(default, skip_serializing_if = "ReindexDecl::is_identity")]
        reindex: ReindexDecl,
    },
}

impl HomDecl {
    pub fn name(&self) -> &str {
        match self {
            HomDecl::Scale { name, .. } | HomDecl::Tables { name, .. } => name,
        }
    }
}

/// `σ(k) = prefix[k]` inside the prefix and `k + offset` past it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReindexDecl {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub prefix: Vec<usize>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub offset: usize,
}

fn is_zero(x: &usize) -> bool {
    *x == 0
}

impl ReindexDecl {
    pub fn is_identity(&self) -> bool {
        self.prefix.is_empty() && self.offset == 0
    }
}

/// A square `m ∘ top = bottom ∘ e` with `e` dense and `m` an embedding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SquareDecl {
    pub name: String,
    pub e: String,
    pub m: String,
    pub top: String,
    pub bottom: String,
}

/// Integer chains coarser than `base`, with the cover relation the interval
/// check is expected to produce.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoarseningDecl {
    pub name: String,
    pub base: String,
    pub quotients: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_covers: Option<Vec<(String, String)>>,
}

impl CorpusDocument {
    /// JSON with one entity per line, the layout of the shipped corpus.
    pub fn to_text(&self) -> String {
        let value = serde_json::to_value(self).expect("documents serialize");
        let map = value.as_object().expect("documents are objects");
        let mut out = String::from("{\n");
        for (i, (key, items)) in map.iter().enumerate() {
            out.push_str(&format!("  {}: [\n", serde_json::to_string(key).unwrap()));
            let items = items.as_array().expect("entity lists are arrays");
            for (j, item) in items.iter().enumerate() {
                let comma = if j + 1 < items.len() { "," } else { "" };
                out.push_str(&format!("    {}{comma}\n", serde_json::to_string(item).unwrap()));
            }
            out.push_str(if i + 1 < map.len() { "  ],\n" } else { "  ]\n" });
        }
        out.push_str("}\n");
        out
    }
}
