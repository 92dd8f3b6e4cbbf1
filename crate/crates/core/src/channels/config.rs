use std::collections::BTreeMap;

use serde::Deserialize;

use super::{ChannelError, LabeledChannel, DEFAULT_AWGN_THRESHOLDS};

/// JSON channel description.
///
/// ```json
/// {"kind":"bsc","p":0.1}
/// {"kind":"biawgn8","sigma":0.8,"q":[0.2,0.6,1.2]}
/// {"kind":"custom","alpha":{"-1":0.1,"1":0.9}}
/// ```
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ChannelConfig {
    Bsc {
        p: f64,
    },
    #[serde(rename = "biawgn8")]
    QuantizedBiAwgn {
        sigma: f64,
        #[serde(default = "default_thresholds")]
        q: [f64; 3],
    },
    Custom {
        alpha: BTreeMap<String, f64>,
    },
}

fn default_thresholds() -> [f64; 3] {
    DEFAULT_AWGN_THRESHOLDS
}

impl ChannelConfig {
    pub fn from_json(text: &str) -> Result<Self, ChannelError> {
        serde_json::from_str(text).map_err(|e| ChannelError::Config(e.to_string()))
    }

    pub fn build(&self) -> Result<LabeledChannel, ChannelError> {
        match self {
            ChannelConfig::Bsc { p } => LabeledChannel::bsc(*p),
            ChannelConfig::QuantizedBiAwgn { sigma, q } => {
                LabeledChannel::quantized_biawgn(*sigma, *q)
            }
            ChannelConfig::Custom { alpha } => {
                let mut map = BTreeMap::new();
                for (key, &prob) in alpha {
                    let label: i64 = key
                        .trim()
                        .parse()
                        .map_err(|_| ChannelError::NonIntegerLabel(key.clone()))?;
                    *map.entry(label).or_insert(0.0) += prob;
                }
                LabeledChannel::custom(&map)
            }
        }
    }
}
