//! Permutations of `{1, ..., N}` in one-line notation.
//!
//! Composition follows `(uv)(i) = u(v(i))`: the right factor is applied
//! first. With this convention the action on polynomials, `ε_i ↦ ε_{w(i)}`,
//! is a left action.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// An element of the symmetric group `S_N`.
///
/// Internally the images are stored zero-based; every public method speaks
/// one-based indices, matching the `[3,1,2]` notation used in output.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u16>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "permutations act on at least one letter");
        assert!(n <= u16::MAX as usize);
        Self {
            images: (0..n as u16).collect(),
        }
    }

    /// Builds a permutation from one-based one-line notation.
    pub fn from_one_line(images: &[usize]) -> Result<Self, Error> {
        let n = images.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("empty one-line notation".into()));
        }
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &v in images {
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection on 1..={n}"
                )));
            }
            seen[v - 1] = true;
            out.push((v - 1) as u16);
        }
        Ok(Self { images: out })
    }

    /// The simple transposition `s_i` swapping `i` and `i + 1`.
    pub fn simple(n: usize, i: usize) -> Self {
        assert!(i >= 1 && i < n, "s_{i} is not a simple reflection of S_{n}");
        let mut p = Self::identity(n);
        p.images.swap(i - 1, i);
        p
    }

    /// Number of letters `N`.
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// `w(i)` for one-based `i`.
    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1] as usize + 1
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &v)| i == v as usize)
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(
            self.degree(),
            other.degree(),
            "composing permutations of different degree"
        );
        Self {
            images: other
                .images
                .iter()
                .map(|&v| self.images[v as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u16; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v as usize] = i as u16;
        }
        Self { images: inv }
    }

    /// Right multiplication by `s_i` in place: `w ← w s_i`.
    ///
    /// In one-line notation this swaps the entries at positions `i`, `i + 1`.
    #[inline]
    pub fn mul_simple_right(&mut self, i: usize) {
        self.images.swap(i - 1, i);
    }

    /// Left multiplication by `s_i` in place: `w ← s_i w`.
    pub fn mul_simple_left(&mut self, i: usize) {
        let (a, b) = ((i - 1) as u16, i as u16);
        for v in &mut self.images {
            if *v == a {
                *v = b;
            } else if *v == b {
                *v = a;
            }
        }
    }

    /// Coxeter length, i.e. the number of inversions.
    pub fn length(&self) -> usize {
        let im = &self.images;
        let mut inv = 0;
        for i in 0..im.len() {
            for j in i + 1..im.len() {
                if im[i] > im[j] {
                    inv += 1;
                }
            }
        }
        inv
    }

    /// Whether `ℓ(w s_i) < ℓ(w)`.
    #[inline]
    pub fn has_right_descent(&self, i: usize) -> bool {
        self.images[i - 1] > self.images[i]
    }

    /// Zero-based images, for hot loops inside the crate.
    pub(crate) fn raw(&self) -> &[u16] {
        &self.images
    }

    pub(crate) fn from_raw(images: Vec<u16>) -> Self {
        Self { images }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, v) in self.images.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let body = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::InvalidPermutation(format!("expected `[..]`, got {s:?}")))?;
        let images = body
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| Error::InvalidPermutation(format!("{s:?}: {e}")))?;
        Self::from_one_line(&images)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
