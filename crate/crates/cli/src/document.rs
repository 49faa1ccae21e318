//! Serializable tower documents. Every renderer works from a
//! [`TowerDocument`] alone.

use serde::{Deserialize, Serialize};
use slicetower::tower::{SliceKind, SliceVerification, Tower, VerificationFailure};
use slicetower::Rep;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerDocument {
    pub format_version: u32,
    pub metadata: Metadata,
    /// top stage first
    pub stages: Vec<StageEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub p: u64,
    pub k: u32,
    pub n: i64,
    pub group: String,
    pub tool_version: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageEntry {
    pub index: usize,
    pub slice: SliceEntry,
    pub section: RepEntry,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub verification: Option<VerificationStatus>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceEntry {
    pub dim: i64,
    pub kind: SliceKind,
    pub coefficient: String,
    pub rep: RepEntry,
    /// the representation as printed in diagrams
    pub display: RepEntry,
}

/// A representation in parseable, readable and LaTeX forms plus its
/// multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepEntry {
    pub text: String,
    pub pretty: String,
    pub latex: String,
    pub trivial: i64,
    /// multiplicities of `λ_0, ..., λ_{k-1}`
    pub lambda: Vec<i64>,
}

impl From<&Rep> for RepEntry {
    fn from(r: &Rep) -> Self {
        RepEntry {
            text: r.ascii_string(),
            pretty: r.pretty_string(),
            latex: r.latex_string(),
            trivial: r.trivial_mult(),
            lambda: r.lambdas().to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationStatus {
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failure: Option<VerificationFailure>,
}

impl From<&SliceVerification> for VerificationStatus {
    fn from(v: &SliceVerification) -> Self {
        VerificationStatus { passed: v.passed(), failure: v.failure.clone() }
    }
}

impl TowerDocument {
    pub fn new(tower: &Tower, verification: Option<&[SliceVerification]>) -> Self {
        let stages = tower
            .stages
            .iter()
            .enumerate()
            .map(|(index, st)| StageEntry {
                index,
                slice: SliceEntry {
                    dim: st.slice.dim,
                    kind: st.slice.kind.clone(),
                    coefficient: st.slice.coefficient.name(),
                    rep: (&st.slice.rep).into(),
                    display: (&st.slice.display_rep()).into(),
                },
                section: (&st.section).into(),
                verification: verification.map(|v| (&v[index]).into()),
            })
            .collect();
        TowerDocument {
            format_version: FORMAT_VERSION,
            metadata: Metadata {
                p: tower.group.p(),
                k: tower.group.k(),
                n: tower.n,
                group: tower.group.to_string(),
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
            },
            stages,
        }
    }

    /// All stages verified, or no verification requested.
    pub fn all_passed(&self) -> bool {
        self.stages.iter().all(|s| s.verification.as_ref().is_none_or(|v| v.passed))
    }
}
