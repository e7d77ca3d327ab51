//! Type A Coxeter combinatorics: words in simple reflections, subexpressions,
//! roots, standard parabolic subgroups and their cosets.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// An expression `s_{i_1} ... s_{i_m}` in `S_N`; repeats are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<usize>,
    ambient: usize,
}

impl Word {
    pub fn new(ambient: usize, letters: Vec<usize>) -> Result<Self> {
        for &i in &letters {
            if i == 0 || i >= ambient {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    max: ambient.saturating_sub(1),
                });
            }
        }
        Ok(Self { letters, ambient })
    }

    pub fn empty(ambient: usize) -> Self {
        Self {
            letters: Vec::new(),
            ambient,
        }
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    /// `N`, the number of letters permuted.
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        assert_eq!(self.ambient, other.ambient);
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word {
            letters,
            ambient: self.ambient,
        }
    }

    /// Drops the last letter.
    pub fn truncated(&self) -> Word {
        let mut w = self.clone();
        w.letters.pop();
        w
    }

    pub fn product(&self) -> Permutation {
        let mut p = Permutation::identity(self.ambient);
        for &i in &self.letters {
            p.mul_simple_right(i);
        }
        p
    }

    pub fn is_reduced(&self) -> bool {
        self.product().length() == self.letters.len()
    }

    /// `w^e = s_1^{e_1} ... s_m^{e_m}`.
    pub fn subexpr_product(&self, e: &Subexpression) -> Result<Permutation> {
        self.check_len(e)?;
        let mut p = Permutation::identity(self.ambient);
        for (&i, &b) in self.letters.iter().zip(e.bits()) {
            if b {
                p.mul_simple_right(i);
            }
        }
        Ok(p)
    }

    /// Prefix products `t_1^{e_1} ... t_j^{e_j}` for `j = 1..=m`.
    pub fn prefix_products(&self, e: &Subexpression) -> Result<Vec<Permutation>> {
        self.check_len(e)?;
        let mut p = Permutation::identity(self.ambient);
        let mut out = Vec::with_capacity(self.len());
        for (&i, &b) in self.letters.iter().zip(e.bits()) {
            if b {
                p.mul_simple_right(i);
            }
            out.push(p.clone());
        }
        Ok(out)
    }

    pub(crate) fn check_len(&self, e: &Subexpression) -> Result<()> {
        if e.len() != self.len() {
            return Err(Error::LengthMismatch {
                word: self.len(),
                bits: e.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, i) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str(")")
    }
}

/// A reduced word for `w`, found by repeatedly stripping right descents.
pub fn reduced_word(w: &Permutation) -> Word {
    let mut cur = w.clone();
    let mut rev = Vec::new();
    'outer: while !cur.is_identity() {
        for i in 1..cur.degree() {
            if cur.has_right_descent(i) {
                cur.mul_simple_right(i);
                rev.push(i);
                continue 'outer;
            }
        }
        unreachable!("a non-identity permutation has a descent");
    }
    rev.reverse();
    Word {
        letters: rev,
        ambient: w.degree(),
    }
}

/// A 0/1 mask on a word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subexpression {
    bits: Vec<bool>,
}

impl Subexpression {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            bits: vec![false; len],
        }
    }

    pub fn ones(len: usize) -> Self {
        Self {
            bits: vec![true; len],
        }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn push(&mut self, b: bool) {
        self.bits.push(b);
    }

    /// Keeps only the bits at the given positions, in order.
    pub fn restrict(&self, positions: &[usize]) -> Subexpression {
        Subexpression {
            bits: positions.iter().map(|&p| self.bits[p]).collect(),
        }
    }

    /// Every mask of the given length, in increasing binary order.
    pub fn all(len: usize) -> impl Iterator<Item = Subexpression> {
        assert!(len < 63, "refusing to enumerate 2^{len} subexpressions");
        (0u64..1 << len).map(move |x| Subexpression {
            bits: (0..len).map(|k| x >> (len - 1 - k) & 1 == 1).collect(),
        })
    }
}

impl fmt::Display for Subexpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Subexpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subexpression({self})")
    }
}

impl FromStr for Subexpression {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidBits(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()
            .map(Subexpression::new)
    }
}

impl Serialize for Subexpression {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Subexpression {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The root `ε_i - ε_j`, `i ≠ j`. Serialized as `{"i":3,"j":2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root {
    i: usize,
    j: usize,
}

impl Root {
    pub fn new(i: usize, j: usize) -> Self {
        assert!(i != j && i >= 1 && j >= 1, "ε_{i} - ε_{j} is not a root");
        Self { i, j }
    }

    /// `α_k = ε_k - ε_{k+1}`.
    pub fn simple(k: usize) -> Self {
        Self::new(k, k + 1)
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn is_positive(&self) -> bool {
        self.i < self.j
    }

    pub fn negate(self) -> Self {
        Self {
            i: self.j,
            j: self.i,
        }
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{} - e{}", self.i, self.j)
    }
}

/// `w(ε_i - ε_j) = ε_{w(i)} - ε_{w(j)}`.
pub fn act_on_root(w: &Permutation, r: Root) -> Root {
    Root {
        i: w.image(r.i),
        j: w.image(r.j),
    }
}

/// A subset `I ⊆ {1, ..., N-1}` of simple reflections, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Parabolic {
    indices: Vec<usize>,
}

impl Parabolic {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Self { indices }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// `{lo, ..., hi}`, empty when `lo > hi`.
    pub fn range(lo: usize, hi: usize) -> Self {
        Self {
            indices: (lo..=hi).collect(),
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn union(&self, other: &Parabolic) -> Parabolic {
        let mut v = self.indices.clone();
        v.extend_from_slice(&other.indices);
        Parabolic::new(v)
    }

    /// Component label of each position `1..=n` (zero-based vector): two
    /// adjacent positions `p, p+1` share a label iff `p ∈ I`.
    pub fn block_labels(&self, n: usize) -> Vec<usize> {
        let mut labels = Vec::with_capacity(n);
        let mut label = 0;
        for p in 1..=n {
            if p > 1 && !self.contains(p - 1) {
                label += 1;
            }
            labels.push(label);
        }
        labels
    }

    /// Maximal runs of consecutive positions joined by `I`, as `(start, end)`
    /// one-based inclusive pairs.
    pub fn blocks(&self, n: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut start = 1;
        for p in 1..=n {
            if p == n || !self.contains(p) {
                out.push((start, p));
                start = p + 1;
            }
        }
        out
    }

    /// Whether `r` lies in the root subsystem `Φ_I`.
    pub fn contains_root(&self, r: Root) -> bool {
        let (lo, hi) = if r.i < r.j { (r.i, r.j) } else { (r.j, r.i) };
        (lo..hi).all(|p| self.contains(p))
    }
}

impl fmt::Display for Parabolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

/// The longest element `w_I` of the standard parabolic subgroup `W_I ⊆ S_n`.
pub fn longest_element(n: usize, parabolic: &Parabolic) -> Permutation {
    let mut images: Vec<u16> = (0..n as u16).collect();
    for (s, e) in parabolic.blocks(n) {
        images[s - 1..e].reverse();
    }
    Permutation::from_raw(images)
}

/// The minimal-length representative of the coset `w W_I`.
///
/// Right multiplication by `W_I` permutes entries of the one-line notation
/// inside each block of positions, so sorting each block gives the minimum.
pub fn min_coset_rep(w: &Permutation, parabolic: &Parabolic) -> Permutation {
    let mut images = w.raw().to_vec();
    for (s, e) in parabolic.blocks(w.degree()) {
        images[s - 1..e].sort_unstable();
    }
    Permutation::from_raw(images)
}

/// Whether `ℓ(w s) > ℓ(w)` for every `s ∈ I`.
pub fn is_min_coset_rep(w: &Permutation, parabolic: &Parabolic) -> bool {
    parabolic
        .indices()
        .iter()
        .all(|&i| i >= w.degree() || !w.has_right_descent(i))
}

/// Whether `u W_I = v W_I`, i.e. `u⁻¹ v ∈ W_I`.
pub fn coset_equal(u: &Permutation, v: &Permutation, parabolic: &Parabolic) -> bool {
    let labels = parabolic.block_labels(u.degree());
    let x = u.inverse().compose(v);
    (1..=x.degree()).all(|p| labels[x.image(p) - 1] == labels[p - 1])
}

/// The set of simple reflections occurring in (every) reduced word of `w`.
pub fn support(w: &Permutation) -> Parabolic {
    let mut out = Vec::new();
    let mut max_seen = 0;
    for p in 1..w.degree() {
        max_seen = max_seen.max(w.image(p));
        if max_seen > p {
            out.push(p);
        }
    }
    Parabolic { indices: out }
}
