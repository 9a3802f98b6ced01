use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};
use crate::real::Real;

/// Scalar model parameters of the multi-cell uplink.
///
/// Field names in serialized form are the conventional symbols
/// (`M`, `K`, `A`, `B`, `S`, `alpha`, `rho`, `sigma2`, `lambda`, `omega`).
/// Distances are in km; energies are relative to the noise energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real"))]
pub struct SystemConfig<T> {
    /// BS antennas.
    #[serde(rename = "M")]
    pub antennas: usize,
    /// UEs per cell.
    #[serde(rename = "K")]
    pub ues_per_cell: usize,
    /// Probability that a UE is active in a coherence block.
    #[serde(rename = "A")]
    pub activity: T,
    /// Pilot sequence length.
    #[serde(rename = "B")]
    pub pilot_len: usize,
    /// Symbols per coherence block.
    #[serde(rename = "S")]
    pub block_len: usize,
    /// Pathloss exponent.
    pub alpha: T,
    /// Power-control target energy.
    pub rho: T,
    /// Noise energy per symbol.
    pub sigma2: T,
    /// BS density per km^2.
    pub lambda: T,
    /// Attenuation at the 1 km reference distance.
    pub omega: T,
}

impl<T: Real> SystemConfig<T> {
    /// The setting of the random-deployment numerical study: M=100, K=30,
    /// A=1, B=60, S=400, alpha=3.76 and rho/sigma2 = 5 dB.
    ///
    /// `lambda` and `omega` cancel from every SE expression; both default to 1.
    pub fn reference() -> Self {
        Self {
            antennas: 100,
            ues_per_cell: 30,
            activity: T::one(),
            pilot_len: 60,
            block_len: 400,
            alpha: T::lit(3.76),
            rho: T::lit(10f64.powf(0.5)),
            sigma2: T::one(),
            lambda: T::one(),
            omega: T::one(),
        }
    }

    /// Sets `sigma2 = 1` and `rho` so that `rho / sigma2` equals `db` decibels.
    pub fn with_snr_db(mut self, db: T) -> Self {
        self.sigma2 = T::one();
        self.rho = T::lit(10.0).powf(db / T::lit(10.0));
        self
    }

    pub fn with_antennas(mut self, m: usize) -> Self {
        self.antennas = m;
        self
    }

    pub fn with_activity(mut self, a: T) -> Self {
        self.activity = a;
        self
    }

    pub fn with_pilot_len(mut self, b: usize) -> Self {
        self.pilot_len = b;
        self
    }

    pub fn snr(&self) -> T {
        self.rho / self.sigma2
    }

    pub fn snr_db(&self) -> T {
        T::lit(10.0) * self.snr().log10()
    }

    /// Mean cell radius scale `1/sqrt(lambda)` in km.
    pub fn cell_scale(&self) -> T {
        self.lambda.sqrt().recip()
    }

    /// Returns the config unchanged if every constraint holds, otherwise the
    /// full list of violations.
    pub fn validate(self) -> Result<Self> {
        let mut v = self.violations_except_pilot();
        v.extend(self.pilot_violations());
        if v.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidConfig(v))
        }
    }

    /// Like [`validate`](Self::validate) but ignores the pilot length.
    pub fn validate_ignoring_pilot(self) -> Result<Self> {
        let v = self.violations_except_pilot();
        if v.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidConfig(v))
        }
    }

    fn pilot_violations(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        if self.pilot_len < self.ues_per_cell {
            v.push(violation("B", "B < K"));
        }
        if self.pilot_len > self.block_len {
            v.push(violation("B", "B > S"));
        }
        v
    }

    fn violations_except_pilot(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        if self.antennas < 1 {
            v.push(violation("M", "M < 1"));
        }
        if self.ues_per_cell < 1 {
            v.push(violation("K", "K < 1"));
        }
        if self.block_len < 1 {
            v.push(violation("S", "S < 1"));
        }
        if self.ues_per_cell > self.block_len {
            v.push(violation("S", "S < K"));
        }
        if !(self.activity >= T::zero() && self.activity <= T::one()) {
            v.push(violation("A", "A not in [0, 1]"));
        }
        if !(self.alpha > T::lit(2.0)) {
            v.push(violation("alpha", "alpha ≤ 2"));
        }
        for (name, x, msg) in [
            ("rho", self.rho, "rho ≤ 0"),
            ("sigma2", self.sigma2, "sigma2 ≤ 0"),
            ("lambda", self.lambda, "lambda ≤ 0"),
            ("omega", self.omega, "omega ≤ 0"),
        ] {
            if !(x > T::zero()) || !x.is_finite() {
                v.push(violation(name, msg));
            }
        }
        v
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    /// Short stable digest of the configuration, used to tag output rows.
    pub fn hash_hex(&self) -> String {
        use sha2::{Digest, Sha256};
        let json = serde_json::to_string(self).expect("config serializes");
        hex::encode(&Sha256::digest(json.as_bytes())[..8])
    }
}

fn violation(field: &'static str, constraint: &str) -> Violation {
    Violation {
        field,
        constraint: constraint.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Cfg = SystemConfig<f64>;

    #[test]
    fn reference_setting_is_valid() {
        let cfg = Cfg::reference();
        assert_eq!(cfg.validate().unwrap(), cfg);
        assert!((cfg.snr_db() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn pilot_shorter_than_ue_count_is_rejected() {
        let err = Cfg::reference().with_pilot_len(20).validate().unwrap_err();
        let v = err.violations();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].field, "B");
        assert_eq!(v[0].constraint, "B < K");
    }

    #[test]
    fn alpha_at_two_is_rejected() {
        let cfg = Cfg {
            alpha: 2.0,
            ..Cfg::reference()
        };
        let err = cfg.validate().unwrap_err();
        assert_eq!(err.violations()[0].constraint, "alpha ≤ 2");
    }

    #[test]
    fn every_violation_is_listed() {
        let cfg = Cfg {
            activity: 1.5,
            pilot_len: 500,
            sigma2: 0.0,
            lambda: f64::NAN,
            ..Cfg::reference()
        };
        let names: Vec<_> = cfg
            .validate()
            .unwrap_err()
            .violations()
            .iter()
            .map(|v| v.constraint.clone())
            .collect();
        assert_eq!(
            names,
            ["A not in [0, 1]", "sigma2 ≤ 0", "lambda ≤ 0", "B > S"]
        );
    }

    #[test]
    fn ignoring_pilot_accepts_short_pilots() {
        assert!(Cfg::reference()
            .with_pilot_len(1)
            .validate_ignoring_pilot()
            .is_ok());
    }

    #[test]
    fn toml_uses_symbol_names() {
        let text = r#"
            M = 100
            K = 30
            A = 0.5
            B = 60
            S = 400
            alpha = 3.76
            rho = 3.1622776601683795
            sigma2 = 1.0
            lambda = 1.0
            omega = 1.0
        "#;
        let cfg = Cfg::from_toml_str(text).unwrap();
        assert_eq!(cfg, Cfg::reference().with_activity(0.5));
        let back = Cfg::from_toml_str(&cfg.to_toml_string()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn hash_changes_with_config() {
        let a = Cfg::reference();
        assert_eq!(a.hash_hex(), Cfg::reference().hash_hex());
        assert_ne!(a.hash_hex(), a.with_antennas(500).hash_hex());
        assert_eq!(a.hash_hex().len(), 16);
    }
}
