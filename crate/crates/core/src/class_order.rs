//! Class-count vectors and the total order over paths.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::hsg::Class;

/// How two class vectors are ranked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderMode {
    /// Rank by the least favorable class present, then by how many edges
    /// carry it. Lower classes are ignored; distance breaks the rest.
    #[default]
    TopClass,
    /// Compare every count from the least favorable class downwards.
    FullLex,
}

impl FromStr for OrderMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "top" | "top_class" => Ok(OrderMode::TopClass),
            "lex" | "full_lex" => Ok(OrderMode::FullLex),
            other => Err(Error::InvalidArgument(format!("unknown order mode {other:?}"))),
        }
    }
}

impl fmt::Display for OrderMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderMode::TopClass => "top",
            OrderMode::FullLex => "lex",
        })
    }
}

/// `(top class, count at top class)`; `(0, 0)` for a path with no edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TopKey {
    pub class: u8,
    pub count: u32,
}

impl fmt::Display for TopKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.class, self.count)
    }
}

/// Number of path edges per semantic class, or the "not yet reached" sentinel.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassVector {
    Finite(SmallVec<[u32; 4]>),
    Unreached,
}

impl ClassVector {
    pub fn zero(num_classes: u8) -> Self {
        ClassVector::Finite(SmallVec::from_elem(0, num_classes as usize))
    }

    pub fn one_hot(class: Class, num_classes: u8) -> Result<Self> {
        if class.get() > num_classes {
            return Err(Error::ClassOutOfRange { class: class.get() as i64, num_classes });
        }
        let mut v = SmallVec::from_elem(0, num_classes as usize);
        v[class.slot()] = 1;
        Ok(ClassVector::Finite(v))
    }

    pub fn from_counts(counts: &[u32]) -> Self {
        ClassVector::Finite(SmallVec::from_slice(counts))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ClassVector::Finite(_))
    }

    pub fn counts(&self) -> Option<&[u32]> {
        match self {
            ClassVector::Finite(c) => Some(c),
            ClassVector::Unreached => None,
        }
    }

    pub fn add(&self, other: &ClassVector) -> Result<ClassVector> {
        match (self, other) {
            (ClassVector::Finite(a), ClassVector::Finite(b)) => {
                if a.len() != b.len() {
                    return Err(Error::LengthMismatch(a.len(), b.len()));
                }
                Ok(ClassVector::Finite(a.iter().zip(b).map(|(x, y)| x + y).collect()))
            }
            _ => Ok(ClassVector::Unreached),
        }
    }

    /// Adds one edge of class `class` in place.
    pub(crate) fn bump(&mut self, class: Class) {
        if let ClassVector::Finite(c) = self {
            c[class.slot()] += 1;
        }
    }

    /// Ranking key under [`OrderMode::TopClass`]. `None` when unreached.
    pub fn top_key(&self) -> Option<TopKey> {
        let counts = self.counts()?;
        Some(top_key_of(counts))
    }

    pub fn compare(&self, other: &ClassVector, mode: OrderMode) -> Result<Ordering> {
        let (a, b) = match (self, other) {
            (ClassVector::Unreached, ClassVector::Unreached) => return Ok(Ordering::Equal),
            (ClassVector::Unreached, _) => return Ok(Ordering::Greater),
            (_, ClassVector::Unreached) => return Ok(Ordering::Less),
            (ClassVector::Finite(a), ClassVector::Finite(b)) => (a, b),
        };
        if a.len() != b.len() {
            return Err(Error::LengthMismatch(a.len(), b.len()));
        }
        Ok(compare_counts(a, b, mode))
    }
}

impl fmt::Display for ClassVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassVector::Unreached => f.write_str("unreached"),
            ClassVector::Finite(c) => {
                f.write_str("(")?;
                for (i, x) in c.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
        }
    }
}

pub(crate) fn top_key_of(counts: &[u32]) -> TopKey {
    counts
        .iter()
        .enumerate()
        .rev()
        .find(|(_, &c)| c > 0)
        .map(|(i, &c)| TopKey { class: i as u8 + 1, count: c })
        .unwrap_or(TopKey { class: 0, count: 0 })
}

/// Same-length comparison; callers check lengths.
pub(crate) fn compare_counts(a: &[u32], b: &[u32], mode: OrderMode) -> Ordering {
    match mode {
        OrderMode::TopClass => top_key_of(a).cmp(&top_key_of(b)),
        OrderMode::FullLex => a.iter().rev().cmp(b.iter().rev()),
    }
}
