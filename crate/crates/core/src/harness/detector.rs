use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// One-sample z-test on reported slackness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorConfig {
    pub mu: f64,
    pub sigma: f64,
    pub alpha: f64,
}

impl DetectorConfig {
    pub fn new(mu: f64, sigma: f64, alpha: f64) -> Result<Self> {
        let config = DetectorConfig { mu, sigma, alpha };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::Config(format!("sigma {} must be positive", self.sigma)));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!("alpha {} must lie in (0, 1)", self.alpha)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZTest {
    pub z: f64,
    pub p_value: f64,
    pub flagged: bool,
}

/// Two-sided test of whether `samples` are drawn with mean `det.mu`.
pub fn z_test(samples: &[f64], det: &DetectorConfig) -> Result<ZTest> {
    det.validate()?;
    if samples.is_empty() {
        return Err(Error::Domain("z-test needs at least one sample".into()));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let z = (mean - det.mu) * n.sqrt() / det.sigma;
    let normal = Normal::standard();
    let p_value = 2.0 * normal.cdf(-z.abs());
    Ok(ZTest { z, p_value, flagged: p_value < det.alpha })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_on_target() {
        let det = DetectorConfig::new(5.0, 2.0, 0.05).unwrap();
        let r = z_test(&[4.0, 6.0], &det).unwrap();
        assert_eq!(r.z, 0.0);
        assert!(!r.flagged);
    }

    #[test]
    fn low_mean_flagged() {
        let det = DetectorConfig::new(5.0, 2.0, 0.05).unwrap();
        let r = z_test(&[4.0; 100], &det).unwrap();
        assert!((r.z + 5.0).abs() < 1e-12);
        assert!(r.flagged);
    }

    #[test]
    fn compressed_stream_flagged() {
        let det = DetectorConfig::new(8.0, 3.0, 0.05).unwrap();
        assert!(z_test(&[0.0; 50], &det).unwrap().flagged);
    }

    #[test]
    fn rejects_bad_input() {
        let det = DetectorConfig::new(1.0, 1.0, 0.05).unwrap();
        assert!(matches!(z_test(&[], &det), Err(Error::Domain(_))));
        assert!(DetectorConfig::new(1.0, 0.0, 0.05).is_err());
        assert!(DetectorConfig::new(1.0, 1.0, 1.0).is_err());
    }
}
