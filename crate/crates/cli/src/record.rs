use bogomolov::FinAbInvariants;
use serde::{Deserialize, Serialize};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub verdict: String,
    pub modulus_exponent: u32,
    pub w: FinAbInvariants,
    pub m_star: FinAbInvariants,
    pub m0: FinAbInvariants,
    pub b0: FinAbInvariants,
}

impl OracleSummary {
    pub fn agrees(&self) -> bool {
        self.verdict == "agree"
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub total_ms: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_ms: Option<f64>,
}

/// One computed result, as printed with `--json` and stored in the cache.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub hash: String,
    pub group: String,
    pub order: String,
    /// Command and result-affecting options, e.g. `b0` or `b0+oracle`.
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b0: Option<FinAbInvariants>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_star: Option<FinAbInvariants>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m0: Option<FinAbInvariants>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<FinAbInvariants>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate_verified: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
    pub timings: Timings,
    pub version: String,
    #[serde(default)]
    pub cached: bool,
}

impl ResultRecord {
    /// False when an oracle run disagreed or a certificate failed.
    pub fn consistent(&self) -> bool {
        self.oracle.as_ref().is_none_or(|o| o.agrees()) && self.certificate_verified != Some(false)
    }
}
