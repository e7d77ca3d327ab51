//! Combinatorial equivariant classes on Bott-Samelson varieties, their
//! push-forwards, and the two routes to the intersection number `C`.
//!
//! A class on `BS(t_1 ... t_m)` described by `f_1, ..., f_m` localizes at
//! `[e]` to `t_1^{e_1}(f_1 t_2^{e_2}(f_2 ... t_m^{e_m}(f_m) ...))`. Pushing
//! forward along the last `P^1`-fibration replaces `f_{m-1}, f_m` by
//! `f_{m-1} ∂_{t_m}(f_m)`; iterating gives
//! `p_!(c) = ∂_{t_1}(f_1 ∂_{t_2}(f_2 ... ∂_{t_m}(f_m) ...))`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fixed::{fibre_fixed_points, normal_bundle_weights, Enumeration};
use crate::perm::Permutation;
use crate::poly::Polynomial;
use crate::seed::{build_x, BuiltExpression, CheckStatus, LetterTag, SeedData};
use crate::symgroup::{act_on_root, Root, Subexpression, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinatorialClass {
    word: Word,
    polys: Vec<Polynomial>,
    /// Extra factor multiplying `f_m`; carries the value once `m = 0`.
    tail: Polynomial,
}

impl CombinatorialClass {
    pub fn new(word: Word, polys: Vec<Polynomial>) -> Result<Self> {
        if polys.len() != word.len() {
            return Err(Error::LengthMismatch {
                word: word.len(),
                bits: polys.len(),
            });
        }
        for p in &polys {
            if p.nvars() != word.ambient() {
                return Err(Error::DimensionMismatch {
                    expected: word.ambient(),
                    found: p.nvars(),
                });
            }
        }
        let tail = Polynomial::one(word.ambient());
        Ok(Self { word, polys, tail })
    }

    /// The class on a point with the given value.
    pub fn point(value: Polynomial) -> Self {
        Self {
            word: Word::empty(value.nvars()),
            polys: Vec::new(),
            tail: value,
        }
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn nvars(&self) -> usize {
        self.word.ambient()
    }

    /// Polynomial degree `Σ deg f_i` (half the cohomological degree), or
    /// `None` for the zero class.
    pub fn degree(&self) -> Option<usize> {
        let mut total = self.tail.degree()?;
        for f in &self.polys {
            total += f.degree()?;
        }
        Some(total)
    }

    /// The value of a class on a point.
    pub fn point_value(&self) -> Option<&Polynomial> {
        self.polys.is_empty().then_some(&self.tail)
    }

    /// Localization `c_e`, folding from the innermost factor outwards.
    pub fn localize(&self, e: &Subexpression) -> Result<Polynomial> {
        self.word.check_len(e)?;
        let mut acc = self.tail.clone();
        for ((&t, f), &b) in self
            .word
            .letters()
            .iter()
            .zip(&self.polys)
            .zip(e.bits())
            .rev()
        {
            acc = f * &acc;
            if b {
                acc = acc.swap_vars(t);
            }
        }
        Ok(acc)
    }

    /// Push-forward along `BS(t_1 ... t_m) → BS(t_1 ... t_{m-1})`.
    pub fn push_last(&self) -> Result<CombinatorialClass> {
        let (&t, rest) = self
            .word
            .letters()
            .split_last()
            .ok_or_else(|| Error::Precondition("cannot push a class on a point".into()))?;
        let last = self.polys.last().expect("one poly per letter") * &self.tail;
        let pushed = last.divided_difference(t);
        let word = Word::new(self.word.ambient(), rest.to_vec())?;
        let mut polys = self.polys[..self.polys.len() - 1].to_vec();
        let tail = match polys.last_mut() {
            Some(f) => {
                *f = &*f * &pushed;
                Polynomial::one(self.nvars())
            }
            None => pushed,
        };
        Ok(CombinatorialClass { word, polys, tail })
    }
}

/// Push-forward from a `P^1` with fixed-point classes `g_0`, `g_∞` and
/// tangent weights `-γ`, `γ`: `(g_0 - g_∞) / γ`.
pub fn p1_push(g0: &Polynomial, ginf: &Polynomial, gamma: Root) -> Result<Polynomial> {
    (g0 - ginf).div_exact_root(gamma)
}

/// `p_!(c)` via the nested divided-difference formula.
pub fn push_to_point(c: &CombinatorialClass) -> Result<Polynomial> {
    let mut cur = c.clone();
    while !cur.word.is_empty() {
        cur = cur.push_last()?;
    }
    Ok(cur.tail)
}

/// `p_!(c)` computed from the full table of localizations, one
/// `P^1`-fibration at a time:
/// `(r_! c)_e = (c_{e0} - c_{e1}) / (t_1^{e_1} ... t_{m-1}^{e_{m-1}})(α_{t_m})`.
///
/// Needs `2^m` localizations. A failed division means the table is not the
/// localization of a class (a GKM divisibility failure).
pub fn push_by_localization(c: &CombinatorialClass) -> Result<Polynomial> {
    let m = c.word.len();
    if m >= 24 {
        return Err(Error::Precondition(format!(
            "localization route needs 2^{m} fixed points"
        )));
    }
    let letters = c.word.letters();
    let mut table: Vec<Polynomial> = Subexpression::all(m)
        .map(|e| c.localize(&e))
        .collect::<Result<_>>()?;
    for level in (1..=m).rev() {
        let t = letters[level - 1];
        let mut next = Vec::with_capacity(1 << (level - 1));
        for x in 0..1usize << (level - 1) {
            let prefix = prefix_from_index(c.nvars(), &letters[..level - 1], x);
            let weight = act_on_root(&prefix, Root::simple(t));
            next.push(p1_push(&table[x << 1], &table[x << 1 | 1], weight)?);
        }
        table = next;
    }
    Ok(table.pop().expect("one entry at the root"))
}

/// `t_1^{e_1} ... t_k^{e_k}` where `e_1` is the most significant bit of `x`.
fn prefix_from_index(nvars: usize, letters: &[usize], x: usize) -> Permutation {
    let k = letters.len();
    let mut p = Permutation::identity(nvars);
    for (pos, &t) in letters.iter().enumerate() {
        if x >> (k - 1 - pos) & 1 == 1 {
            p.mul_simple_right(t);
        }
    }
    p
}

/// `c_{e0} - c_{e1}` divisible by `(t_1^{e_1} ... t_{m-1}^{e_{m-1}})(α_{t_m})`
/// for every `e ⊂ t_1 ... t_{m-1}`.
pub fn gkm_divisible_at_last(c: &CombinatorialClass) -> Result<bool> {
    let m = c.word.len();
    if m == 0 {
        return Ok(true);
    }
    let letters = c.word.letters();
    let t = letters[m - 1];
    for x in 0..1usize << (m - 1) {
        let mut e0 = Subexpression::new((0..m - 1).map(|k| x >> (m - 2 - k) & 1 == 1).collect());
        let mut e1 = e0.clone();
        e0.push(false);
        e1.push(true);
        let prefix = prefix_from_index(c.nvars(), &letters[..m - 1], x);
        let weight = act_on_root(&prefix, Root::simple(t));
        if (c.localize(&e0)? - c.localize(&e1)?)
            .div_exact_root(weight)
            .is_err()
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(ε_n - ε_{n+1}) ... (ε_n - ε_{n+a_i})` in `nvars` variables.
pub fn n_product(n: usize, a_i: usize, nvars: usize) -> Polynomial {
    let en = Polynomial::var(nvars, n);
    (1..=a_i).fold(Polynomial::one(nvars), |acc, j| {
        acc * (&en - &Polynomial::var(nvars, n + j))
    })
}

/// Offsets (one-based, in the word `w_m ... w_1`) of the last letter of
/// each block, listed as `(block index i, position)` in the order `m, ..., 1`.
fn block_ends(seed: &SeedData) -> Vec<(usize, usize)> {
    let mut pos = 0;
    (1..=seed.m())
        .rev()
        .map(|i| {
            pos += seed.block_length(i);
            (i, pos)
        })
        .collect()
}

fn w_concat(seed: &SeedData, ambient: usize) -> Word {
    (1..=seed.m()).rev().fold(Word::empty(ambient), |acc, i| {
        acc.concat(&seed.w_word(i, ambient))
    })
}

/// Class on `BS(w_m ... w_1)` with `f = n_i` at the end of the block of `w_i`
/// and `f = 1` elsewhere.
pub fn euler_class_polys(seed: &SeedData) -> CombinatorialClass {
    let big_n = seed.ambient();
    let word = w_concat(seed, big_n);
    let mut polys = vec![Polynomial::one(big_n); word.len()];
    for (i, pos) in block_ends(seed) {
        polys[pos - 1] = n_product(seed.n(), seed.blocks()[i - 1].a, big_n);
    }
    CombinatorialClass::new(word, polys).expect("one poly per letter")
}

/// The class whose localizations are the products of the normal-bundle
/// weights, read off from `x` directly: the factor at the end of block `i`
/// is `∏ σ(-α_n)` over the `s_n` letters of `z_i`, where `σ` is the product
/// of the `A` letters of `x` preceding that letter.
pub fn normal_bundle_class(bx: &BuiltExpression) -> CombinatorialClass {
    let seed = &bx.seed;
    let big_n = seed.ambient();
    let minus_alpha_n = Root::simple(seed.n()).negate();
    let mut sigma = Permutation::identity(big_n);
    let mut factor = vec![Polynomial::one(big_n); seed.m() + 1];
    for (tag, &t) in bx.tags.iter().zip(bx.x_word.letters()) {
        match *tag {
            LetterTag::M(_) => {}
            LetterTag::A(_) => sigma.mul_simple_right(t),
            LetterTag::Special(i) => {
                let w = Polynomial::from_root(big_n, act_on_root(&sigma, minus_alpha_n));
                factor[i] = &factor[i] * &w;
            }
        }
    }
    let word = bx.w_word();
    let mut polys = vec![Polynomial::one(big_n); word.len()];
    for (i, pos) in block_ends(seed) {
        polys[pos - 1] = factor[i].clone();
    }
    CombinatorialClass::new(word, polys).expect("one poly per letter")
}

fn to_integer(p: Polynomial) -> Result<BigInt> {
    p.as_integer()
        .ok_or_else(|| Error::NotConstant(p.to_string()))
}

/// Nested evaluation `∂_{w_m}(g_m ∂_{w_{m-1}}(g_{m-1} ... ∂_{w_1}(g_1) ...))`
/// in `nvars` variables, with `g_i` supplied per block.
fn nested(seed: &SeedData, nvars: usize, g: impl Fn(usize) -> Polynomial) -> Result<BigInt> {
    let mut f = Polynomial::one(nvars);
    for i in 1..=seed.m() {
        f = (g(i) * f).divided_difference_word(&seed.w_word(i, nvars))?;
    }
    to_integer(f)
}

/// `C = ∂_{w_m}(ε_n^{a_m} ∂_{w_{m-1}}(... ∂_{w_1}(ε_n^{a_1}) ...))` in
/// `ℤ[ε_1, ..., ε_n]`.
pub fn compute_c_direct(seed: &SeedData) -> Result<BigInt> {
    let n = seed.n();
    nested(seed, n, |i| {
        Polynomial::monomial(n, 1, &[(n, seed.blocks()[i - 1].a as u16)])
    })
}

/// Push-forward of the Euler class described by [`euler_class_polys`].
pub fn compute_c_euler(seed: &SeedData) -> Result<BigInt> {
    to_integer(push_to_point(&euler_class_polys(seed))?)
}

/// Push-forward of [`normal_bundle_class`].
pub fn compute_c_normal_bundle(seed: &SeedData) -> Result<BigInt> {
    to_integer(push_to_point(&normal_bundle_class(&build_x(seed)))?)
}

/// `+1` if `x = y`, `-1` if `x = -y`, `None` otherwise. Zero pairs with
/// zero as `+1`.
pub fn relative_sign(x: &BigInt, y: &BigInt) -> Option<i8> {
    if x == y {
        Some(1)
    } else if x == &-y {
        Some(-1)
    } else {
        None
    }
}

fn poly_relative_sign(x: &Polynomial, y: &Polynomial) -> Option<i8> {
    if x == y {
        Some(1)
    } else if *x == -y {
        Some(-1)
    } else {
        None
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InvReport {
    pub passed: bool,
    /// The nested value after replacing `n_1, ..., n_j` by `ε_n^{a_i}`,
    /// `j = 0..=m`, computed in `N` variables.
    #[serde(serialize_with = "crate::report::ser_bigint_vec")]
    pub stepwise: Vec<BigInt>,
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub direct: BigInt,
    pub invariance_checks: usize,
    pub invariance_failures: usize,
}

/// Replacing each `n_i` by `ε_n^{a_i}` one block at a time leaves the integer
/// unchanged, and `∂_i(h g) = h ∂_i(g)` holds for sampled `W_M`-invariant `h`.
pub fn check_lemma_inv(seed: &SeedData) -> Result<InvReport> {
    let n = seed.n();
    let big_n = seed.ambient();
    let power = |i: usize| Polynomial::monomial(big_n, 1, &[(n, seed.blocks()[i - 1].a as u16)]);
    let mut stepwise = Vec::with_capacity(seed.m() + 1);
    for replaced in 0..=seed.m() {
        stepwise.push(nested(seed, big_n, |i| {
            if i <= replaced {
                power(i)
            } else {
                n_product(n, seed.blocks()[i - 1].a, big_n)
            }
        })?);
    }
    let direct = compute_c_direct(seed)?;

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ big_n as u64);
    let mut checks = 0;
    let mut failures = 0;
    for _ in 0..8 {
        let h = random_wm_invariant(&mut rng, n, big_n);
        let g = random_poly(&mut rng, big_n, 4, 6);
        for i in 1..n {
            checks += 1;
            if (&h * &g).divided_difference(i) != &h * &g.divided_difference(i) {
                failures += 1;
            }
        }
    }
    let passed = failures == 0 && stepwise.iter().all(|v| v == &direct);
    Ok(InvReport {
        passed,
        stepwise,
        direct,
        invariance_checks: checks,
        invariance_failures: failures,
    })
}

/// A random polynomial with up to `terms` monomials of degree `<= max_deg`
/// and small coefficients.
pub fn random_poly<R: Rng>(rng: &mut R, nvars: usize, max_deg: u16, terms: usize) -> Polynomial {
    let mut p = Polynomial::zero(nvars);
    for _ in 0..terms {
        let mut powers = Vec::new();
        let mut budget = rng.gen_range(0..=max_deg);
        while budget > 0 {
            let k = rng.gen_range(1..=budget);
            powers.push((rng.gen_range(1..=nvars), k));
            budget -= k;
        }
        let c: i64 = rng.gen_range(-9..=9);
        p = p + Polynomial::monomial(nvars, c, &powers);
    }
    p
}

/// Product of an elementary symmetric polynomial in `ε_1..ε_n` and a random
/// monomial in the variables above `n`. Invariant under `W_M`; positive
/// degree.
fn random_wm_invariant<R: Rng>(rng: &mut R, n: usize, nvars: usize) -> Polynomial {
    let k = rng.gen_range(1..=n);
    let mut e_k = Polynomial::zero(nvars);
    for subset in 0u64..1 << n {
        if subset.count_ones() as usize == k {
            let powers: Vec<_> = (0..n)
                .filter(|b| subset >> b & 1 == 1)
                .map(|b| (b + 1, 1))
                .collect();
            e_k = e_k + Polynomial::monomial(nvars, 1, &powers);
        }
    }
    if nvars > n {
        let j = rng.gen_range(n + 1..=nvars);
        let e = rng.gen_range(0..=2);
        e_k = e_k * Polynomial::monomial(nvars, 1, &[(j, e)]);
    }
    e_k
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossCheckPoint {
    pub point: Subexpression,
    pub w_bits: Subexpression,
    pub weights: Vec<Root>,
    /// Sign relating the weight product to the `n_i` localization, when the
    /// two agree up to sign as polynomials.
    pub literal_sign: Option<i8>,
    /// The same comparison after setting `ε_{n+1}, ..., ε_N` to zero.
    pub specialized_sign: Option<i8>,
    /// The weight product equals the localization of [`normal_bundle_class`].
    pub derived_exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossCheckReport {
    pub status: CheckStatus,
    pub nodes: u64,
    pub fixed_points: usize,
    pub expected_fixed_points: u64,
    /// Restrictions to the `w` letters are pairwise distinct.
    pub w_bits_distinct: bool,
    /// Every weight multiset has `a` entries, all outside `Φ_{M ∪ A}`.
    pub weights_ok: bool,
    pub derived_exact: bool,
    /// Common literal sign over all fixed points, if there is one.
    pub literal_sign: Option<i8>,
    /// Common sign after specialization, if there is one.
    pub sign: Option<i8>,
    pub points: Vec<CrossCheckPoint>,
}

/// Compares, at every fixed point of the fibre over `w_A`, the product of the
/// normal-bundle weights with the localization of [`euler_class_polys`].
pub fn euler_class_cross_check(seed: &SeedData, budget: u64) -> Result<CrossCheckReport> {
    let bx = build_x(seed);
    let big_n = seed.ambient();
    let enumeration = fibre_fixed_points(&bx.x_word, &seed.m_set(), &seed.w_a(), budget);
    let nodes = enumeration.nodes();
    let expected = 1u64 << seed.a().min(63);
    let found = match enumeration {
        Enumeration::Complete { points, .. } => points,
        Enumeration::Inconclusive { .. } => {
            return Ok(CrossCheckReport {
                status: CheckStatus::Inconclusive,
                nodes,
                fixed_points: 0,
                expected_fixed_points: expected,
                w_bits_distinct: false,
                weights_ok: false,
                derived_exact: false,
                literal_sign: None,
                sign: None,
                points: Vec::new(),
            })
        }
    };
    let n_class = euler_class_polys(seed);
    let derived_class = normal_bundle_class(&bx);
    let outside = seed.m_set().union(&seed.a_set());
    let above_n = |i: usize| i > seed.n();

    let mut points = Vec::with_capacity(found.len());
    let mut seen = std::collections::BTreeSet::new();
    let mut weights_ok = true;
    for e in &found {
        let weights = normal_bundle_weights(&bx, e)?;
        weights_ok &=
            weights.len() == seed.a() && weights.iter().all(|r| !outside.contains_root(*r));
        let product = weights.iter().fold(Polynomial::one(big_n), |acc, r| {
            acc * Polynomial::from_root(big_n, *r)
        });
        let w_bits = e.restrict(&bx.w_positions);
        seen.insert(w_bits.clone());
        let local = n_class.localize(&w_bits)?;
        let derived = derived_class.localize(&w_bits)?;
        points.push(CrossCheckPoint {
            point: e.clone(),
            literal_sign: poly_relative_sign(&product, &local),
            specialized_sign: poly_relative_sign(
                &product.specialize_to_zero(above_n),
                &local.specialize_to_zero(above_n),
            ),
            derived_exact: derived == product,
            w_bits,
            weights,
        });
    }
    let common = |f: fn(&CrossCheckPoint) -> Option<i8>| {
        let first = points.first().and_then(f)?;
        points.iter().all(|p| f(p) == Some(first)).then_some(first)
    };
    let literal_sign = common(|p| p.literal_sign);
    let sign = common(|p| p.specialized_sign);
    let derived_exact = points.iter().all(|p| p.derived_exact);
    let w_bits_distinct = seen.len() == points.len();
    let passed = sign.is_some()
        && derived_exact
        && weights_ok
        && w_bits_distinct
        && points.len() as u64 == expected;
    Ok(CrossCheckReport {
        status: if passed {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        nodes,
        fixed_points: points.len(),
        expected_fixed_points: expected,
        w_bits_distinct,
        weights_ok,
        derived_exact,
        literal_sign,
        sign,
        points,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PushReport {
    pub passed: bool,
    pub gkm_divisible: bool,
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub nested: BigInt,
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub localization: BigInt,
}

/// Pushes the seed's Euler class to a point along both routes.
pub fn check_push(seed: &SeedData) -> Result<PushReport> {
    let c = euler_class_polys(seed);
    let gkm_divisible = gkm_divisible_at_last(&c)?;
    let nested = to_integer(push_to_point(&c)?)?;
    let localization = match push_by_localization(&c) {
        Ok(p) => to_integer(p)?,
        Err(Error::NotDivisible { .. }) => {
            return Ok(PushReport {
                passed: false,
                gkm_divisible: false,
                localization: BigInt::zero(),
                nested,
            })
        }
        Err(e) => return Err(e),
    };
    Ok(PushReport {
        passed: gkm_divisible && nested == localization,
        gkm_divisible,
        nested,
        localization,
    })
}

/// Both routes to `C`, with `C_euler = sign · C_direct`.
#[derive(Clone, Debug)]
pub struct TwoRoutes {
    pub direct: BigInt,
    pub euler: BigInt,
    pub sign: i8,
}

/// Computes `C` both ways; disagreement beyond sign is an error.
pub fn compute_both(seed: &SeedData) -> Result<TwoRoutes> {
    let direct = compute_c_direct(seed)?;
    let euler = compute_c_euler(seed)?;
    match relative_sign(&euler, &direct) {
        Some(sign) => Ok(TwoRoutes {
            direct,
            euler,
            sign,
        }),
        None => Err(Error::RouteDisagreement {
            seed: serde_json::to_string(seed)?,
            direct: direct.to_string(),
            euler: euler.to_string(),
        }),
    }
}

impl TwoRoutes {
    pub fn abs(&self) -> BigInt {
        self.direct.abs()
    }

    pub fn is_unit(&self) -> bool {
        self.direct.abs().is_one()
    }
}
