//! Two-dimensional synthetic problems.
//!
//! Every scenario trains on target clusters only and tests on fresh target
//! samples plus non-target samples. Target patterns carry the label
//! [`TARGET_LABEL`], the rest [`OTHER_LABEL`].

use std::fmt::Write as _;

use crate::data::{synth_clusters, ClusterSpec, Dataset, SplitRole};
use crate::error::Result;

pub const TARGET_LABEL: &str = "target";
pub const OTHER_LABEL: &str = "other";

const CLUSTER_CENTERS: [[f64; 2]; 3] = [[0.2, 0.2], [0.8, 0.2], [0.5, 0.8]];
const CLUSTER_SD: f64 = 0.03;
const TRAIN_PER_CLUSTER: usize = 20;
const TEST_PER_CLUSTER: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// Three well-separated spherical target clusters.
    ThreeClusters,
    /// Same training data; test patterns sit at x = 0.5 in bands that are
    /// wide in x and very narrow in y.
    NarrowBand,
    /// Three clusters plus one isolated target training pattern.
    Isolated,
    /// Two target clusters far apart in x and stretched along y.
    Anisotropic,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [
        Scenario::ThreeClusters,
        Scenario::NarrowBand,
        Scenario::Isolated,
        Scenario::Anisotropic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::ThreeClusters => "three-clusters",
            Scenario::NarrowBand => "narrow-band",
            Scenario::Isolated => "isolated",
            Scenario::Anisotropic => "anisotropic",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|x| x.name() == s)
    }

    /// Number of decision regions the layout is built around.
    pub fn expected_regions(self) -> usize {
        match self {
            Scenario::ThreeClusters | Scenario::NarrowBand => 3,
            Scenario::Isolated => 4,
            Scenario::Anisotropic => 2,
        }
    }

    pub fn specs(self) -> Vec<ClusterSpec> {
        use SplitRole::{Test, Train};
        let spherical = |c: &[f64; 2], sd, n, label, role| ClusterSpec::spherical(c, sd, n, label, role);
        let three_train = || {
            CLUSTER_CENTERS
                .iter()
                .map(|c| spherical(c, CLUSTER_SD, TRAIN_PER_CLUSTER, TARGET_LABEL, Train))
                .collect::<Vec<_>>()
        };
        let three_test = || {
            let mut v: Vec<ClusterSpec> = CLUSTER_CENTERS
                .iter()
                .map(|c| spherical(c, CLUSTER_SD, TEST_PER_CLUSTER, TARGET_LABEL, Test))
                .collect();
            v.push(spherical(&[0.5, 0.45], 0.05, 30, OTHER_LABEL, Test));
            v
        };
        match self {
            Scenario::ThreeClusters => [three_train(), three_test()].concat(),
            Scenario::Isolated => {
                let mut v = three_train();
                v.push(spherical(&[-0.3, 1.4], 0.0, 1, TARGET_LABEL, Train));
                v.extend(three_test());
                v
            }
            Scenario::NarrowBand => {
                let mut v = three_train();
                v.push(ClusterSpec::axis_aligned(&[0.5, 0.8], &[0.06, 0.005], 20, TARGET_LABEL, Test));
                v.push(ClusterSpec::axis_aligned(&[0.5, 0.5], &[0.06, 0.005], 20, OTHER_LABEL, Test));
                v
            }
            Scenario::Anisotropic => {
                let sds = [0.02, 0.15];
                let mut v = Vec::new();
                for (n, role) in [(TRAIN_PER_CLUSTER, Train), (TEST_PER_CLUSTER, Test)] {
                    for x in [0.2, 0.8] {
                        v.push(ClusterSpec::axis_aligned(&[x, 0.5], &sds, n, TARGET_LABEL, role));
                    }
                }
                v.push(spherical(&[0.5, 0.5], 0.04, 20, OTHER_LABEL, Test));
                v
            }
        }
    }

    pub fn generate(self, seed: u64) -> Result<Dataset> {
        synth_clusters(&self.specs(), TARGET_LABEL, seed)
    }

    /// Plain-text record of the generator parameters.
    pub fn manifest(self, seed: u64) -> String {
        let mut out = String::new();
        writeln!(out, "scenario {}", self.name()).unwrap();
        writeln!(out, "seed {seed}").unwrap();
        writeln!(out, "target_class {TARGET_LABEL}").unwrap();
        writeln!(out, "# role label count center covariance(row-major)").unwrap();
        for s in self.specs() {
            let role = match s.role {
                SplitRole::Train => "train",
                SplitRole::Test => "test",
            };
            let join = |v: &mut dyn Iterator<Item = &f64>| v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
            writeln!(
                out,
                "cluster {role} {} {} [{}] [{}]",
                s.label,
                s.count,
                join(&mut s.center.iter()),
                join(&mut s.covariance.iter().flatten())
            )
            .unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Scenario::ALL {
            assert_eq!(Scenario::from_name(s.name()), Some(s));
        }
        assert_eq!(Scenario::from_name("nope"), None);
    }

    #[test]
    fn layouts() {
        let ds = Scenario::Isolated.generate(1).unwrap();
        assert_eq!(ds.splits.train.len(), 3 * TRAIN_PER_CLUSTER + 1);
        assert!(ds.splits.train.iter().all(|&i| ds.is_target(i)));
        let last = ds.patterns[ds.splits.train[3 * TRAIN_PER_CLUSTER]].as_features().unwrap().to_vec();
        assert_eq!(last, vec![-0.3, 1.4]);

        let nb = Scenario::NarrowBand.generate(1).unwrap();
        for &i in &nb.splits.test {
            let x = nb.patterns[i].as_features().unwrap();
            assert!((x[0] - 0.5).abs() < 0.4);
        }
    }

    #[test]
    fn seeded() {
        assert_eq!(Scenario::Anisotropic.generate(4).unwrap(), Scenario::Anisotropic.generate(4).unwrap());
        assert_ne!(Scenario::Anisotropic.generate(4).unwrap(), Scenario::Anisotropic.generate(5).unwrap());
    }

    #[test]
    fn manifest_lists_every_cluster() {
        let m = Scenario::ThreeClusters.manifest(3);
        assert_eq!(m.lines().filter(|l| l.starts_with("cluster")).count(), 7);
    }
}
