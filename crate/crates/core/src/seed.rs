//! Seed data `(n, [(k_1, a_1), ..., (k_m, a_m)])` and the reduced expression
//! `x = w_m z_m ... w_2 z_2 w_1 z_1` in `S_N` that it determines.
//!
//! Each `w_i` is the unique reduced word `s_{k_i} s_{k_i+1} ... s_{n-1}`;
//! each `z_i` is a product of runs `s_n s_{n+1} ... s_{n+L-1}` for `L`
//! descending from `a_1 + ... + a_i` to `a_1 + ... + a_{i-1} + 1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SeedError};
use crate::fixed::{fibre_fixed_points, Enumeration};
use crate::perm::Permutation;
use crate::symgroup::{is_min_coset_rep, longest_element, Parabolic, Subexpression, Word};

/// Largest ambient rank `N = n + a` accepted from input.
pub const MAX_AMBIENT: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Block {
    pub k: usize,
    pub a: usize,
}

/// Validated seed. Construct with [`SeedData::new`] or by deserializing
/// `{"n": 4, "blocks": [{"k": 2, "a": 3}, ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawSeed")]
pub struct SeedData {
    n: usize,
    blocks: Vec<Block>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSeed {
    n: usize,
    blocks: Vec<Block>,
}

impl TryFrom<RawSeed> for SeedData {
    type Error = SeedError;

    fn try_from(raw: RawSeed) -> Result<Self, SeedError> {
        SeedData::new(raw.n, raw.blocks)
    }
}

impl SeedData {
    pub fn new(n: usize, blocks: Vec<Block>) -> Result<Self, SeedError> {
        if n < 2 {
            return Err(SeedError::Rank(n));
        }
        if blocks.is_empty() {
            return Err(SeedError::NoBlocks);
        }
        for (idx, b) in blocks.iter().enumerate() {
            if b.k == 0 || b.k >= n {
                return Err(SeedError::KRange {
                    block: idx + 1,
                    k: b.k,
                    max: n - 1,
                });
            }
            if b.a == 0 {
                return Err(SeedError::APositive { block: idx + 1 });
            }
        }
        let lengths: usize = blocks.iter().map(|b| n - b.k).sum();
        let exponents: usize = blocks.iter().map(|b| b.a).sum();
        if lengths != exponents {
            return Err(SeedError::Balance { lengths, exponents });
        }
        if n + exponents > MAX_AMBIENT {
            return Err(SeedError::TooLarge(n + exponents));
        }
        Ok(Self { n, blocks })
    }

    /// Shorthand for `(k, a)` pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, SeedError> {
        Self::new(n, pairs.iter().map(|&(k, a)| Block { k, a }).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn m(&self) -> usize {
        self.blocks.len()
    }

    /// `a = Σ a_i`.
    pub fn a(&self) -> usize {
        self.blocks.iter().map(|b| b.a).sum()
    }

    /// `N = n + a`.
    pub fn ambient(&self) -> usize {
        self.n + self.a()
    }

    /// `ℓ(w_i) = n - k_i`, one-based `i`.
    pub fn block_length(&self, i: usize) -> usize {
        self.n - self.blocks[i - 1].k
    }

    /// Expected `ℓ(x) = a + a(a+1)/2`.
    pub fn expected_x_length(&self) -> usize {
        let a = self.a();
        a + a * (a + 1) / 2
    }

    /// `M = {1, ..., n-1}`.
    pub fn m_set(&self) -> Parabolic {
        Parabolic::range(1, self.n - 1)
    }

    /// `A = {n+1, ..., n+a-1}`; empty when `a = 1`.
    pub fn a_set(&self) -> Parabolic {
        Parabolic::range(self.n + 1, self.n + self.a() - 1)
    }

    /// `w_A` in `S_N`.
    pub fn w_a(&self) -> Permutation {
        longest_element(self.ambient(), &self.a_set())
    }

    /// The reduced word `s_{k_i} ... s_{n-1}` for `w_i`, read in `S_ambient`.
    pub fn w_word(&self, i: usize, ambient: usize) -> Word {
        let k = self.blocks[i - 1].k;
        Word::new(ambient, (k..self.n).collect()).expect("letters below n")
    }

    /// Compact `k:a` list, e.g. `2:3;3:2`.
    pub fn compact_blocks(&self) -> String {
        self.blocks
            .iter()
            .map(|b| format!("{}:{}", b.k, b.a))
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn parse_compact(n: usize, s: &str) -> std::result::Result<Self, String> {
        let mut blocks = Vec::new();
        for part in s.split(';').filter(|p| !p.is_empty()) {
            let (k, a) = part
                .split_once(':')
                .ok_or_else(|| format!("block {part:?} is not k:a"))?;
            blocks.push(Block {
                k: k.trim().parse().map_err(|_| format!("bad k in {part:?}"))?,
                a: a.trim().parse().map_err(|_| format!("bad a in {part:?}"))?,
            });
        }
        Self::new(n, blocks).map_err(|e| e.to_string())
    }
}

impl fmt::Display for SeedData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} [{}]", self.n, self.compact_blocks())
    }
}

/// Role of a letter of `x`, with the one-based block index it came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "block", rename_all = "snake_case")]
pub enum LetterTag {
    /// A letter of `w_i`, lying in `M`.
    M(usize),
    /// An occurrence of `s_n` inside `z_i`.
    Special(usize),
    /// A letter of `z_i` lying in `A`.
    A(usize),
}

#[derive(Clone, Debug)]
pub struct BuiltExpression {
    pub seed: SeedData,
    pub x_word: Word,
    pub tags: Vec<LetterTag>,
    /// Positions (zero-based) of the `w_i` letters, in the order `w_m, ..., w_1`.
    pub w_positions: Vec<usize>,
}

impl BuiltExpression {
    /// The concatenation `w_m w_{m-1} ... w_1` of the `M`-letters of `x`.
    pub fn w_word(&self) -> Word {
        let letters = self
            .w_positions
            .iter()
            .map(|&p| self.x_word.letters()[p])
            .collect();
        Word::new(self.seed.ambient(), letters).expect("letters of x are in range")
    }

    /// The concatenation `z_m ... z_1`.
    pub fn z_word(&self) -> Word {
        let letters = self
            .tags
            .iter()
            .zip(self.x_word.letters())
            .filter(|(t, _)| !matches!(t, LetterTag::M(_)))
            .map(|(_, &l)| l)
            .collect();
        Word::new(self.seed.ambient(), letters).expect("letters of x are in range")
    }

    /// `z'_m ... z'_1`: the `z` letters with every `s_n` deleted.
    pub fn z_prime_word(&self) -> Word {
        let letters = self
            .tags
            .iter()
            .zip(self.x_word.letters())
            .filter(|(t, _)| matches!(t, LetterTag::A(_)))
            .map(|(_, &l)| l)
            .collect();
        Word::new(self.seed.ambient(), letters).expect("letters of x are in range")
    }

    /// The subexpression of `x` that agrees with `w_bits` on the `w` letters,
    /// takes every `A` letter and skips every `s_n`.
    pub fn lift_w_bits(&self, w_bits: &Subexpression) -> Subexpression {
        assert_eq!(w_bits.len(), self.w_positions.len());
        let mut it = w_bits.bits().iter();
        Subexpression::new(
            self.tags
                .iter()
                .map(|t| match t {
                    LetterTag::M(_) => *it.next().expect("one bit per w letter"),
                    LetterTag::Special(_) => false,
                    LetterTag::A(_) => true,
                })
                .collect(),
        )
    }
}

/// `z_i` for one-based block index `i`.
pub fn build_z_block(i: usize, seed: &SeedData) -> Word {
    assert!(i >= 1 && i <= seed.m(), "block {i} out of range");
    let n = seed.n();
    let before: usize = seed.blocks()[..i - 1].iter().map(|b| b.a).sum();
    let through = before + seed.blocks()[i - 1].a;
    let mut letters = Vec::new();
    for run in (before + 1..=through).rev() {
        letters.extend(n..n + run);
    }
    Word::new(seed.ambient(), letters).expect("z letters lie below N")
}

pub fn build_x(seed: &SeedData) -> BuiltExpression {
    let big_n = seed.ambient();
    let mut letters = Vec::with_capacity(seed.expected_x_length());
    let mut tags = Vec::with_capacity(seed.expected_x_length());
    let mut w_positions = Vec::with_capacity(seed.a());
    for i in (1..=seed.m()).rev() {
        for &l in seed.w_word(i, big_n).letters() {
            w_positions.push(letters.len());
            letters.push(l);
            tags.push(LetterTag::M(i));
        }
        for &l in build_z_block(i, seed).letters() {
            letters.push(l);
            tags.push(if l == seed.n() {
                LetterTag::Special(i)
            } else {
                LetterTag::A(i)
            });
        }
    }
    BuiltExpression {
        seed: seed.clone(),
        x_word: Word::new(big_n, letters).expect("x letters lie below N"),
        tags,
        w_positions,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct XpropReport {
    pub length: usize,
    pub expected_length: usize,
    pub reduced: bool,
    pub minimal_in_coset: bool,
}

impl XpropReport {
    pub fn passed(&self) -> bool {
        self.reduced && self.minimal_in_coset && self.length == self.expected_length
    }
}

/// `x` is reduced and minimal in `x W_M`.
pub fn check_lemma_xprop(bx: &BuiltExpression) -> XpropReport {
    let x = bx.x_word.product();
    XpropReport {
        length: bx.x_word.len(),
        expected_length: bx.seed.expected_x_length(),
        reduced: x.length() == bx.x_word.len(),
        minimal_in_coset: is_min_coset_rep(&x, &bx.seed.m_set()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct SubReport {
    pub status: CheckStatus,
    pub solutions: usize,
    pub nodes: u64,
    /// Solutions breaking the forced pattern (empty on pass).
    pub violations: Vec<Subexpression>,
}

/// Enumerates every `e ⊂ x` with `x^e ∈ w_A W_M` and checks that each one
/// takes every `A` letter and skips every `s_n`.
///
/// The search does not assume the pattern; it only prunes branches whose
/// remaining letters cannot reach the target coset.
pub fn check_lemma_sub(bx: &BuiltExpression, budget: u64) -> SubReport {
    let enumeration = fibre_fixed_points(&bx.x_word, &bx.seed.m_set(), &bx.seed.w_a(), budget);
    let nodes = enumeration.nodes();
    let (points, complete) = match enumeration {
        Enumeration::Complete { points, .. } => (points, true),
        Enumeration::Inconclusive { partial, .. } => (partial, false),
    };
    let violations: Vec<_> = points
        .iter()
        .filter(|e| !matches_forced_pattern(bx, e))
        .cloned()
        .collect();
    let status = if !violations.is_empty() {
        CheckStatus::Fail
    } else if complete {
        CheckStatus::Pass
    } else {
        CheckStatus::Inconclusive
    };
    SubReport {
        status,
        solutions: points.len(),
        nodes,
        violations,
    }
}

pub fn matches_forced_pattern(bx: &BuiltExpression, e: &Subexpression) -> bool {
    bx.tags.iter().zip(e.bits()).all(|(t, &b)| match t {
        LetterTag::M(_) => true,
        LetterTag::Special(_) => !b,
        LetterTag::A(_) => b,
    })
}
