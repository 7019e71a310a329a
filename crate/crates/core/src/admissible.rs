//! Admissibility of a forged demand vector with respect to the true one.

use std::fmt;

use crate::model::{Demand, JobSet, ENERGY_TOL};

/// Names of the admissibility constraints, reported on violation.
pub mod constraint {
    pub const MAPPING: &str = "mapping";
    pub const MODEL: &str = "model";
    pub const ARRIVAL_NESTING: &str = "arrival_nesting";
    pub const DEADLINE_NESTING: &str = "deadline_nesting";
    pub const ENERGY_CONSERVATION: &str = "energy_conservation";
    pub const SERVICE_CONSERVATION: &str = "service_conservation";
    pub const POWER_PRESERVED: &str = "power_preserved";
    pub const DISJOINT_WINDOWS: &str = "disjoint_windows";
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Original job id.
    pub job: usize,
    pub constraint: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "job {}: {} violated ({})", self.job, self.constraint, self.detail)
    }
}

impl std::error::Error for Violation {}

/// `mapping[j]` lists the forged ids that stand in for original job `j`.
pub fn validate_admissible(original: &JobSet, forged: &JobSet, mapping: &[Vec<usize>]) -> Result<(), Violation> {
    let fail = |job: usize, constraint: &'static str, detail: String| Err(Violation { job, constraint, detail });

    if forged.model() != original.model() {
        return fail(0, constraint::MODEL, "forged set uses a different demand model".into());
    }
    if mapping.len() != original.len() {
        return fail(
            mapping.len().min(original.len()),
            constraint::MAPPING,
            format!("mapping covers {} of {} jobs", mapping.len(), original.len()),
        );
    }
    let mut owner = vec![None; forged.len()];
    for (j, ids) in mapping.iter().enumerate() {
        for &k in ids {
            if k >= forged.len() {
                return fail(j, constraint::MAPPING, format!("forged id {k} does not exist"));
            }
            if let Some(other) = owner[k] {
                return fail(j, constraint::MAPPING, format!("forged id {k} already claimed by job {other}"));
            }
            owner[k] = Some(j);
        }
    }
    if let Some(k) = owner.iter().position(Option::is_none) {
        return fail(0, constraint::MAPPING, format!("forged job {k} has no original"));
    }

    for (j, ids) in mapping.iter().enumerate() {
        let job = original.job(j);
        for &k in ids {
            let f = forged.job(k);
            if f.arrival < job.arrival {
                return fail(j, constraint::ARRIVAL_NESTING, format!("a'={} < a={}", f.arrival, job.arrival));
            }
            if f.deadline > job.deadline {
                return fail(j, constraint::DEADLINE_NESTING, format!("d'={} > d={}", f.deadline, job.deadline));
            }
        }
        match job.demand {
            Demand::TotalEnergy { energy } => {
                let total: f64 = ids.iter().map(|&k| forged.job(k).energy()).sum();
                if (total - energy).abs() > ENERGY_TOL * (1.0 + energy) {
                    return fail(j, constraint::ENERGY_CONSERVATION, format!("forged energy {total} != {energy}"));
                }
            }
            Demand::ConstantPower { service, power } => {
                let mut total = 0;
                for &k in ids {
                    let f = forged.job(k);
                    if (f.power() - power).abs() > ENERGY_TOL {
                        return fail(j, constraint::POWER_PRESERVED, format!("p'={} != p={power}", f.power()));
                    }
                    total += f.service();
                }
                if total != service {
                    return fail(j, constraint::SERVICE_CONSERVATION, format!("forged service {total} != {service}"));
                }
                for (x, &k1) in ids.iter().enumerate() {
                    for &k2 in &ids[x + 1..] {
                        let (f1, f2) = (forged.job(k1), forged.job(k2));
                        if f1.arrival <= f2.deadline && f2.arrival <= f1.deadline {
                            return fail(
                                j,
                                constraint::DISJOINT_WINDOWS,
                                format!("subjobs {k1} and {k2} overlap"),
                            );
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// The identity forging: job `j` is presented as itself.
pub fn identity_mapping(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|j| vec![j]).collect()
}

/// Inverts a forged-to-original table into the `mapping` form.
pub fn mapping_from_origin(origin: &[usize], n_original: usize) -> Vec<Vec<usize>> {
    let mut mapping = vec![Vec::new(); n_original];
    for (k, &j) in origin.iter().enumerate() {
        mapping[j].push(k);
    }
    mapping
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Demand, Model};

    #[test]
    fn identity_is_admissible() {
        let set = JobSet::te(&[(1, 3, 6.0), (2, 4, 6.0)]).unwrap();
        assert!(validate_admissible(&set, &set, &identity_mapping(2)).is_ok());
        let cp = JobSet::cp(&[(1, 3, 2, 2.0), (1, 3, 1, 3.0)]).unwrap();
        assert!(validate_admissible(&cp, &cp, &identity_mapping(2)).is_ok());
    }

    #[test]
    fn compression_inside_window_is_admissible() {
        let set = JobSet::te(&[(1, 3, 6.0)]).unwrap();
        let forged = JobSet::te(&[(2, 2, 6.0)]).unwrap().with_horizon(set.horizon()).unwrap();
        assert!(validate_admissible(&set, &forged, &[vec![0]]).is_ok());
    }

    #[test]
    fn split_past_deadline_is_rejected() {
        let set = JobSet::te(&[(1, 3, 6.0)]).unwrap();
        let forged = JobSet::te(&[(1, 1, 3.0), (4, 4, 3.0)]).unwrap();
        let err = validate_admissible(&set, &forged, &[vec![0, 1]]).unwrap_err();
        assert_eq!(err.job, 0);
        assert_eq!(err.constraint, constraint::DEADLINE_NESTING);
    }

    #[test]
    fn energy_must_be_conserved() {
        let set = JobSet::te(&[(1, 3, 6.0)]).unwrap();
        let forged = JobSet::te(&[(2, 2, 5.0)]).unwrap();
        let err = validate_admissible(&set, &forged, &[vec![0]]).unwrap_err();
        assert_eq!(err.constraint, constraint::ENERGY_CONSERVATION);
    }

    #[test]
    fn cp_subjobs_must_be_disjoint_and_keep_power() {
        let set = JobSet::cp(&[(1, 4, 2, 2.0)]).unwrap();
        let ok = JobSet::cp(&[(1, 1, 1, 2.0), (3, 3, 1, 2.0)]).unwrap();
        assert!(validate_admissible(&set, &ok, &[vec![0, 1]]).is_ok());

        let overlap = JobSet::cp(&[(1, 2, 1, 2.0), (2, 3, 1, 2.0)]).unwrap();
        let err = validate_admissible(&set, &overlap, &[vec![0, 1]]).unwrap_err();
        assert_eq!(err.constraint, constraint::DISJOINT_WINDOWS);

        let power = JobSet::cp(&[(1, 2, 2, 3.0)]).unwrap();
        let err = validate_admissible(&set, &power, &[vec![0]]).unwrap_err();
        assert_eq!(err.constraint, constraint::POWER_PRESERVED);

        let short = JobSet::cp(&[(1, 2, 1, 2.0)]).unwrap();
        let err = validate_admissible(&set, &short, &[vec![0]]).unwrap_err();
        assert_eq!(err.constraint, constraint::SERVICE_CONSERVATION);
    }

    #[test]
    fn mapping_must_cover_everything_once() {
        let set = JobSet::te(&[(1, 3, 6.0), (1, 3, 1.0)]).unwrap();
        let err = validate_admissible(&set, &set, &[vec![0]]).unwrap_err();
        assert_eq!(err.constraint, constraint::MAPPING);
        let err = validate_admissible(&set, &set, &[vec![0, 1], vec![1]]).unwrap_err();
        assert_eq!(err.constraint, constraint::MAPPING);
        let cp = JobSet::build(Model::ConstantPower, 4, vec![(1, 3, Demand::ConstantPower { service: 1, power: 1.0 })])
            .unwrap();
        assert_eq!(validate_admissible(&set, &cp, &[vec![0], vec![]]).unwrap_err().constraint, constraint::MODEL);
    }
}
