//! Torus-fixed points of Bott-Samelson varieties, as pure combinatorics.
//!
//! A fixed point of `BS(t_1 ... t_m)` is a subexpression `e`. The chart
//! around it has weights `(t_1^{e_1} ... t_j^{e_j})(-α_{t_j})`, and the
//! attracting cell is cut out by the coordinates whose weight is negative.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::seed::{BuiltExpression, LetterTag};
use crate::symgroup::{
    act_on_root, coset_equal, min_coset_rep, support, Parabolic, Root, Subexpression, Word,
};

/// The fixed point `[e]` of `BS(word)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    word: Word,
    bits: Subexpression,
}

impl FixedPoint {
    pub fn new(word: Word, bits: Subexpression) -> Result<Self> {
        word.check_len(&bits)?;
        Ok(Self { word, bits })
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn bits(&self) -> &Subexpression {
        &self.bits
    }

    /// Torus weights on the chart `C_e`, one per position.
    pub fn chart_weights(&self) -> WeightList {
        let mut prefix = Permutation::identity(self.word.ambient());
        let mut out = Vec::with_capacity(self.word.len());
        for (&t, &b) in self.word.letters().iter().zip(self.bits.bits()) {
            if b {
                prefix.mul_simple_right(t);
            }
            out.push(act_on_root(&prefix, Root::simple(t).negate()));
        }
        WeightList(out)
    }

    /// One-based positions whose chart weight is positive: the free
    /// coordinates of the attracting cell `C_e^+`.
    pub fn bb_cell_coordinates(&self) -> Vec<usize> {
        self.chart_weights()
            .0
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_positive())
            .map(|(p, _)| p + 1)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct WeightList(pub Vec<Root>);

/// Result of a budgeted enumeration.
#[derive(Clone, Debug)]
pub enum Enumeration {
    Complete {
        points: Vec<Subexpression>,
        nodes: u64,
    },
    /// The node budget ran out; `partial` holds what was found so far.
    Inconclusive {
        partial: Vec<Subexpression>,
        nodes: u64,
    },
}

impl Enumeration {
    pub fn nodes(&self) -> u64 {
        match self {
            Enumeration::Complete { nodes, .. } | Enumeration::Inconclusive { nodes, .. } => *nodes,
        }
    }

    pub fn is_complete(&self) -> bool {
        matches!(self, Enumeration::Complete { .. })
    }

    pub fn complete(self) -> Option<Vec<Subexpression>> {
        match self {
            Enumeration::Complete { points, .. } => Some(points),
            Enumeration::Inconclusive { .. } => None,
        }
    }
}

struct Dfs<'a> {
    letters: &'a [usize],
    parabolic: &'a Parabolic,
    target: &'a Permutation,
    /// `suffix_support[j][i]`: letter `i` occurs in positions `j..`.
    suffix_support: Vec<Vec<bool>>,
    budget: u64,
    nodes: u64,
    bits: Vec<bool>,
    found: Vec<Subexpression>,
}

impl Dfs<'_> {
    /// Can some subword of `letters[pos..]` carry `prefix W_M` to `target W_M`?
    ///
    /// With `r` the minimal representative of `prefix⁻¹ target W_M`, any
    /// suitable subword product `v` factors as `r y` with lengths adding, so
    /// it needs at least `ℓ(r)` letters and every simple reflection in the
    /// support of `r`.
    fn feasible(&self, prefix: &Permutation, pos: usize) -> bool {
        let need = min_coset_rep(&prefix.inverse().compose(self.target), self.parabolic);
        let remaining = self.letters.len() - pos;
        if need.length() > remaining {
            return false;
        }
        let avail = &self.suffix_support[pos];
        support(&need).indices().iter().all(|&i| avail[i])
    }

    /// Returns `false` once the budget is exhausted.
    fn visit(&mut self, prefix: &mut Permutation, pos: usize) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            return false;
        }
        if !self.feasible(prefix, pos) {
            return true;
        }
        if pos == self.letters.len() {
            debug_assert!(coset_equal(prefix, self.target, self.parabolic));
            self.found.push(Subexpression::new(self.bits.clone()));
            return true;
        }
        let t = self.letters[pos];
        self.bits.push(false);
        let ok = self.visit(prefix, pos + 1);
        self.bits.pop();
        if !ok {
            return false;
        }
        prefix.mul_simple_right(t);
        self.bits.push(true);
        let ok = self.visit(prefix, pos + 1);
        self.bits.pop();
        prefix.mul_simple_right(t);
        ok
    }
}

/// All `e ⊂ word` with `word^e W_M = target W_M`, in lexicographic order
/// (`0 < 1`), found by depth-first search over prefixes.
///
/// Each visited prefix costs one node of `budget`; running out yields
/// [`Enumeration::Inconclusive`] rather than a silently truncated list.
pub fn fibre_fixed_points(
    word: &Word,
    parabolic: &Parabolic,
    target: &Permutation,
    budget: u64,
) -> Enumeration {
    assert_eq!(word.ambient(), target.degree());
    let n = word.ambient();
    let letters = word.letters();
    let mut suffix_support = vec![vec![false; n]; letters.len() + 1];
    for j in (0..letters.len()).rev() {
        let mut s = suffix_support[j + 1].clone();
        s[letters[j]] = true;
        suffix_support[j] = s;
    }
    let mut dfs = Dfs {
        letters,
        parabolic,
        target,
        suffix_support,
        budget,
        nodes: 0,
        bits: Vec::with_capacity(letters.len()),
        found: Vec::new(),
    };
    let mut prefix = Permutation::identity(n);
    let finished = dfs.visit(&mut prefix, 0);
    if finished {
        Enumeration::Complete {
            points: dfs.found,
            nodes: dfs.nodes,
        }
    } else {
        Enumeration::Inconclusive {
            partial: dfs.found,
            nodes: dfs.nodes,
        }
    }
}

/// Torus weights on the normal bundle of the fibre over `w_A` at `[e]`:
/// `t_1^{e_1} ... t_j^{e_j}(-α_n)` for every position `j` with `t_j = s_n`.
pub fn normal_bundle_weights(bx: &BuiltExpression, e: &Subexpression) -> Result<Vec<Root>> {
    let seed = &bx.seed;
    let x = bx.x_word.subexpr_product(e)?;
    if !coset_equal(&x, &seed.w_a(), &seed.m_set()) {
        return Err(Error::Precondition(format!(
            "{e} is not a fixed point of the fibre over w_A"
        )));
    }
    let prefixes = bx.x_word.prefix_products(e)?;
    let minus_alpha_n = Root::simple(seed.n()).negate();
    Ok(bx
        .tags
        .iter()
        .zip(prefixes.iter())
        .filter(|(t, _)| matches!(t, LetterTag::Special(_)))
        .map(|(_, p)| act_on_root(p, minus_alpha_n))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::{build_x, SeedData};

    fn word(n: usize, l: &[usize]) -> Word {
        Word::new(n, l.to_vec()).unwrap()
    }

    #[test]
    fn chart_weights_small_cases() {
        let p = FixedPoint::new(word(2, &[1]), "1".parse().unwrap()).unwrap();
        assert_eq!(p.chart_weights().0, vec![Root::new(1, 2)]);
        assert_eq!(p.bb_cell_coordinates(), vec![1]);

        let p = FixedPoint::new(word(3, &[1, 2]), "10".parse().unwrap()).unwrap();
        assert_eq!(p.chart_weights().0, vec![Root::new(1, 2), Root::new(3, 1)]);

        let p = FixedPoint::new(word(4, &[1, 3, 2]), "000".parse().unwrap()).unwrap();
        assert_eq!(
            p.chart_weights().0,
            vec![Root::new(2, 1), Root::new(4, 3), Root::new(3, 2)]
        );
        assert!(p.bb_cell_coordinates().is_empty());
    }

    #[test]
    fn fixed_point_rejects_length_mismatch() {
        assert!(FixedPoint::new(word(3, &[1, 2]), "1".parse().unwrap()).is_err());
    }

    #[test]
    fn fibre_of_minimal_seed() {
        let s = SeedData::from_pairs(2, &[(1, 1)]).unwrap();
        let bx = build_x(&s);
        let pts = fibre_fixed_points(&bx.x_word, &s.m_set(), &s.w_a(), 100)
            .complete()
            .unwrap();
        let got: Vec<String> = pts.iter().map(|e| e.to_string()).collect();
        assert_eq!(got, vec!["00", "10"]);
    }

    #[test]
    fn full_word_is_found_for_its_own_product() {
        let w = word(4, &[1, 2, 3, 1]);
        let pts = fibre_fixed_points(&w, &Parabolic::empty(), &w.product(), 1 << 20)
            .complete()
            .unwrap();
        assert!(pts.contains(&Subexpression::ones(4)));
    }

    #[test]
    fn normal_weights_of_minimal_seed() {
        let s = SeedData::from_pairs(2, &[(1, 1)]).unwrap();
        let bx = build_x(&s);
        assert_eq!(
            normal_bundle_weights(&bx, &"00".parse().unwrap()).unwrap(),
            vec![Root::new(3, 2)]
        );
        assert_eq!(
            normal_bundle_weights(&bx, &"10".parse().unwrap()).unwrap(),
            vec![Root::new(3, 1)]
        );
        assert!(normal_bundle_weights(&bx, &"01".parse().unwrap()).is_err());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let w = word(5, &[1, 2, 3, 4, 1, 2, 3, 4]);
        let e = fibre_fixed_points(&w, &Parabolic::empty(), &Permutation::identity(5), 5);
        assert!(!e.is_complete());
    }
}
