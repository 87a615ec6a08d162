//! Suite configuration: truncation, orders, seed, tolerances, suite
//! selection. Invalid configurations are usage errors (exit code 2).

use std::collections::BTreeMap;
use std::fmt;

/// Identifier of a verification suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SuiteId {
    Adjoint,
    Forms,
    Blocks,
    Transvections,
    Subspaces,
    Repair,
    Experiments,
}

impl SuiteId {
    pub const ALL: [SuiteId; 7] = [
        SuiteId::Adjoint,
        SuiteId::Forms,
        SuiteId::Blocks,
        SuiteId::Transvections,
        SuiteId::Subspaces,
        SuiteId::Repair,
        SuiteId::Experiments,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteId::Adjoint => "adjoint",
            SuiteId::Forms => "forms",
            SuiteId::Blocks => "blocks",
            SuiteId::Transvections => "transvections",
            SuiteId::Subspaces => "subspaces",
            SuiteId::Repair => "repair",
            SuiteId::Experiments => "experiments",
        }
    }

    pub fn parse(name: &str) -> Option<SuiteId> {
        Self::ALL.iter().copied().find(|s| s.name() == name)
    }

    /// Suites that build twisted forms or odd-order rotations need an even
    /// truncation.
    pub fn requires_even_truncation(self) -> bool {
        matches!(
            self,
            SuiteId::Adjoint | SuiteId::Forms | SuiteId::Transvections | SuiteId::Subspaces
        )
    }
}

/// Named residual thresholds, each pinned to its default and overridable
/// from the command line. Every tolerance is strictly positive.
#[derive(Debug, Clone)]
pub struct Tolerances {
    values: BTreeMap<&'static str, f64>,
}

pub const TOLERANCE_DEFAULTS: [(&str, f64); 19] = [
    ("adjoint_interleaved", 1e-10),
    ("adjoint_block", 1e-12),
    ("adjoint_triangular", 1e-10),
    ("adjoint_involution", 1e-10),
    ("sharp_definition", 1e-10),
    ("alternation", 1e-12),
    ("block_preservation", 1e-9),
    ("range_projection", 1e-9),
    ("transvection_preservation", 1e-10),
    ("transvection_laws", 1e-12),
    ("equivalence", 1e-8),
    ("polar_residual", 1e-9),
    ("triangular_check", 1e-9),
    ("unbounded_norm", 1e-12),
    ("subspace_rank", 1e-10),
    ("isotropy", 1e-10),
    ("sqrt_series", 1e-10),
    ("perturbation", 1e-8),
    ("spectrum_real", 1e-8),
];

impl Default for Tolerances {
    fn default() -> Self {
        Self { values: TOLERANCE_DEFAULTS.iter().copied().collect() }
    }
}

impl Tolerances {
    pub fn get(&self, name: &str) -> f64 {
        *self.values.get(name).unwrap_or_else(|| panic!("unknown tolerance {name}"))
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<(), ConfigError> {
        if value <= 0.0 || !value.is_finite() {
            return Err(ConfigError(format!("tolerance {name} must be positive, got {value}")));
        }
        let key = TOLERANCE_DEFAULTS
            .iter()
            .map(|(k, _)| *k)
            .find(|k| *k == name)
            .ok_or_else(|| ConfigError(format!("unknown tolerance name: {name}")))?;
        self.values.insert(key, value);
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, f64)> + '_ {
        self.values.iter().map(|(k, v)| (*k, *v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Markdown,
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    /// Truncation size `N`; even whenever a twisted suite is selected.
    pub truncation: usize,
    /// Largest tuple order exercised.
    pub max_order: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub suites: Vec<SuiteId>,
    pub format: ReportFormat,
}

#[derive(Debug, Clone)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.truncation < 2 {
            return Err(ConfigError(format!(
                "truncation must be at least 2, got {}",
                self.truncation
            )));
        }
        if self.max_order < 2 || self.max_order > 8 {
            return Err(ConfigError(format!(
                "max order must lie in 2..=8, got {}",
                self.max_order
            )));
        }
        if self.suites.is_empty() {
            return Err(ConfigError("no suite selected".to_string()));
        }
        if !self.truncation.is_multiple_of(2) {
            if let Some(s) = self.suites.iter().find(|s| s.requires_even_truncation()) {
                return Err(ConfigError(format!(
                    "suite '{}' uses twisted forms and needs an even truncation, got {}",
                    s.name(),
                    self.truncation
                )));
            }
        }
        Ok(())
    }
}

/// Per-case deterministic substream: the case identity is hashed into the
/// seed so selecting or deselecting suites never shifts other cases.
pub fn case_seed(seed: u64, suite: &str, case: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in suite.bytes().chain(*b"/").chain(case.bytes()) {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h ^ seed
}
