//! Domain types for heart-sound recordings.

use serde::{Deserialize, Serialize};

/// Source sub-dataset tag. The challenge corpus combines six independently
/// collected databases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Subset {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl Subset {
    pub fn from_letter(c: char) -> Option<Subset> {
        match c.to_ascii_lowercase() {
            'a' => Some(Subset::A),
            'b' => Some(Subset::B),
            'c' => Some(Subset::C),
            'd' => Some(Subset::D),
            'e' => Some(Subset::E),
            'f' => Some(Subset::F),
            _ => None,
        }
    }

    pub fn letter(&self) -> char {
        match self {
            Subset::A => 'a',
            Subset::B => 'b',
            Subset::C => 'c',
            Subset::D => 'd',
            Subset::E => 'e',
            Subset::F => 'f',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    Normal,
    Abnormal,
    Unlabelled,
}

impl Label {
    /// Numeric form used in feature CSVs: 0 = Normal, 1 = Abnormal, -1 = unlabelled.
    pub fn to_code(self) -> i8 {
        match self {
            Label::Normal => 0,
            Label::Abnormal => 1,
            Label::Unlabelled => -1,
        }
    }

    pub fn from_code(code: i8) -> Option<Label> {
        match code {
            0 => Some(Label::Normal),
            1 => Some(Label::Abnormal),
            -1 => Some(Label::Unlabelled),
            _ => None,
        }
    }
}

/// One recording: identity, provenance, and the decoded signal.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioRecord {
    pub id: String,
    pub subset: Subset,
    pub sample_rate: u32,
    pub samples: Vec<f64>,
    pub label: Label,
}

impl AudioRecord {
    pub fn duration_secs(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }
}
