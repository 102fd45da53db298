use std::fmt;

use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};

/// Nonempty set of users, stored as a bitmask over indices `0..K`.
///
/// Serializes as the ascending list of 1-based user labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subset(u32);

impl Subset {
    pub fn from_mask(mask: u32, users: usize) -> Result<Self> {
        if mask == 0 || (users < 32 && mask >> users != 0) {
            return Err(Error::InvalidSubset { users });
        }
        Ok(Subset(mask))
    }

    /// Builds a subset from 0-based user indices.
    pub fn from_indices(indices: &[usize], users: usize) -> Result<Self> {
        let mut mask = 0u32;
        for &i in indices {
            if i >= users || i >= 32 {
                return Err(Error::InvalidSubset { users });
            }
            mask |= 1 << i;
        }
        Self::from_mask(mask, users)
    }

    /// The whole user set `{0, .., users-1}`.
    pub fn full(users: usize) -> Self {
        debug_assert!((1..=31).contains(&users));
        Subset((1u32 << users) - 1)
    }

    /// Every nonempty subset of `users` users, in ascending mask order.
    pub fn all(users: usize) -> impl Iterator<Item = Subset> {
        (1u32..(1u32 << users)).map(Subset)
    }

    #[inline]
    pub fn mask(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn contains(self, user: usize) -> bool {
        user < 32 && self.0 & (1 << user) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// 0-based member indices, ascending.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..32).filter(move |&i| mask & (1 << i) != 0)
    }

    /// 1-based member labels, ascending.
    pub fn labels(self) -> Vec<usize> {
        self.indices().map(|i| i + 1).collect()
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, label) in self.labels().into_iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{label}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for label in self.labels() {
            seq.serialize_element(&label)?;
        }
        seq.end()
    }
}
