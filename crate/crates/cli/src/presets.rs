//! Named hyperparameter presets for the classical models.

use cardioscope_models::boosting::BoostingParams;
use cardioscope_models::forest::ForestParams;
use cardioscope_models::svm::{Gamma, SvmParams};
use cardioscope_models::tree::{ClassWeights, TreeParams};
use cardioscope_core::FEATURE_DIMS;

#[derive(Debug, Clone)]
pub enum MlSpec {
    Tree(TreeParams),
    Forest(ForestParams),
    Boosting(BoostingParams),
    Svm(SvmParams),
}

#[derive(Debug, Clone)]
pub struct Preset {
    pub name: &'static str,
    pub spec: MlSpec,
    pub smote: bool,
}

pub fn preset(name: &str) -> Option<Preset> {
    let p = match name {
        "dt" => Preset {
            name: "dt",
            spec: MlSpec::Tree(TreeParams {
                max_depth: 40,
                max_leaf_nodes: 40,
                class_weights: ClassWeights::new(5.0, 1.0),
            }),
            smote: false,
        },
        "dt-smote" => Preset {
            name: "dt-smote",
            spec: MlSpec::Tree(TreeParams {
                max_depth: 60,
                max_leaf_nodes: 40,
                class_weights: ClassWeights::default(),
            }),
            smote: true,
        },
        "svm" => Preset {
            name: "svm",
            spec: MlSpec::Svm(SvmParams {
                c: 0.07,
                gamma: Gamma::Auto,
                class_weights: ClassWeights::new(19.0, 3.0),
                tol: 1e-3,
            }),
            smote: false,
        },
        "svm-smote" => Preset {
            name: "svm-smote",
            spec: MlSpec::Svm(SvmParams {
                c: 70.0,
                gamma: Gamma::Auto,
                class_weights: ClassWeights::default(),
                tol: 1e-3,
            }),
            smote: true,
        },
        "rf" => Preset {
            name: "rf",
            spec: MlSpec::Forest(ForestParams {
                n_estimators: 400,
                max_depth: 10,
                max_leaf_nodes: 50,
                class_weights: ClassWeights::new(5.0, 1.0),
                features_per_split: Some(ForestParams::sqrt_features(FEATURE_DIMS)),
                bootstrap: true,
                seed: 0,
            }),
            smote: false,
        },
        "rf-smote" => Preset {
            name: "rf-smote",
            spec: MlSpec::Forest(ForestParams {
                n_estimators: 100,
                max_depth: 10,
                max_leaf_nodes: 64,
                class_weights: ClassWeights::default(),
                features_per_split: Some(ForestParams::sqrt_features(FEATURE_DIMS)),
                bootstrap: true,
                seed: 0,
            }),
            smote: true,
        },
        "gb" => Preset {
            name: "gb",
            spec: MlSpec::Boosting(BoostingParams { n_estimators: 400, max_depth: 7, learning_rate: 0.1 }),
            smote: false,
        },
        "gb-smote" => Preset {
            name: "gb-smote",
            spec: MlSpec::Boosting(BoostingParams { n_estimators: 400, max_depth: 6, learning_rate: 0.1 }),
            smote: true,
        },
        _ => return None,
    };
    Some(p)
}

pub const PRESET_NAMES: [&str; 8] = ["dt", "dt-smote", "svm", "svm-smote", "rf", "rf-smote", "gb", "gb-smote"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gb_smote_preset_values() {
        let p = preset("gb-smote").unwrap();
        assert!(p.smote);
        match p.spec {
            MlSpec::Boosting(b) => {
                assert_eq!(b.n_estimators, 400);
                assert_eq!(b.max_depth, 6);
                assert_eq!(b.learning_rate, 0.1);
            }
            _ => panic!("wrong model kind"),
        }
    }

    #[test]
    fn svm_preset_weights() {
        let p = preset("svm").unwrap();
        match p.spec {
            MlSpec::Svm(s) => {
                assert_eq!(s.c, 0.07);
                assert_eq!(s.class_weights.abnormal, 19.0);
                assert_eq!(s.class_weights.normal, 3.0);
            }
            _ => panic!("wrong model kind"),
        }
    }

    #[test]
    fn all_names_resolve() {
        for name in PRESET_NAMES {
            assert!(preset(name).is_some(), "{name}");
        }
        assert!(preset("nope").is_none());
    }
}
