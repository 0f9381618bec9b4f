//! Generalized and weak Collatz mappings, orbit experiments, and the
//! embedding of a weak mapping into a one-variable loop.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};
use thiserror::Error;

use crate::poly2::{Constraint, HPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CollatzError {
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(BigInt),
    #[error("expected {expected} branch entries, got {got}")]
    BranchCount { expected: usize, got: usize },
    #[error("multiplier must be nonzero")]
    ZeroMultiplier,
    #[error("multiplier {m} is not coprime to modulus {d}")]
    NotCoprime { m: BigInt, d: BigInt },
    #[error("branch {branch}: {m}*{branch} is not congruent to {r} mod {d}")]
    NonIntegral { branch: usize, m: BigInt, r: BigInt, d: BigInt },
    #[error("loop embedding needs m > d (m = {m}, d = {d})")]
    PreconditionMDnotGreater { m: BigInt, d: BigInt },
}

/// `T(x) = (m_i x - r_i) / d` where `i = x mod d` in `[0, d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenCollatz {
    d: BigInt,
    m: Vec<BigInt>,
    r: Vec<BigInt>,
}

impl GenCollatz {
    pub fn new(d: impl Into<BigInt>, m: Vec<BigInt>, r: Vec<BigInt>) -> Result<Self, CollatzError> {
        let d = d.into();
        check_modulus(&d)?;
        let n = usize::try_from(&d).map_err(|_| CollatzError::BranchCount { expected: usize::MAX, got: m.len() })?;
        for len in [m.len(), r.len()] {
            if len != n {
                return Err(CollatzError::BranchCount { expected: n, got: len });
            }
        }
        for (i, (mi, ri)) in m.iter().zip(&r).enumerate() {
            check_multiplier(mi, &d)?;
            if !(mi * BigInt::from(i) - ri).is_multiple_of(&d) {
                return Err(CollatzError::NonIntegral { branch: i, m: mi.clone(), r: ri.clone(), d: d.clone() });
            }
        }
        Ok(GenCollatz { d, m, r })
    }

    /// `x -> x/2` on evens, `x -> (3x + 1)/2` on odds.
    pub fn classical() -> Self {
        Self::new(2, vec![1.into(), 3.into()], vec![0.into(), (-1).into()]).expect("valid mapping")
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn m(&self) -> &[BigInt] {
        &self.m
    }

    pub fn r(&self) -> &[BigInt] {
        &self.r
    }
}

/// `T(x) = floor((m x - a) / d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakCollatz {
    d: BigInt,
    m: BigInt,
    a: BigInt,
}

impl WeakCollatz {
    pub fn new(d: impl Into<BigInt>, m: impl Into<BigInt>, a: impl Into<BigInt>) -> Result<Self, CollatzError> {
        let (d, m, a) = (d.into(), m.into(), a.into());
        check_modulus(&d)?;
        check_multiplier(&m, &d)?;
        Ok(WeakCollatz { d, m, a })
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn m(&self) -> &BigInt {
        &self.m
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    /// Branch index `i` in `[0, d)` with `m x ≡ a + i (mod d)`.
    pub fn branch(&self, x: &BigInt) -> BigInt {
        (&self.m * x - &self.a).mod_floor(&self.d)
    }

    /// The target condition of reachability: `m x ≡ a (mod d)`.
    pub fn on_target(&self, x: &BigInt) -> bool {
        self.branch(x).is_zero()
    }
}

fn check_modulus(d: &BigInt) -> Result<(), CollatzError> {
    if *d < BigInt::from(2) {
        return Err(CollatzError::ModulusTooSmall(d.clone()));
    }
    Ok(())
}

fn check_multiplier(m: &BigInt, d: &BigInt) -> Result<(), CollatzError> {
    if m.is_zero() {
        return Err(CollatzError::ZeroMultiplier);
    }
    if !m.abs().gcd(d).is_one() {
        return Err(CollatzError::NotCoprime { m: m.clone(), d: d.clone() });
    }
    Ok(())
}

pub trait Mapping {
    fn modulus(&self) -> &BigInt;
    fn apply(&self, x: &BigInt) -> BigInt;
}

impl Mapping for GenCollatz {
    fn modulus(&self) -> &BigInt {
        &self.d
    }

    fn apply(&self, x: &BigInt) -> BigInt {
        gen_apply(self, x)
    }
}

impl Mapping for WeakCollatz {
    fn modulus(&self) -> &BigInt {
        &self.d
    }

    fn apply(&self, x: &BigInt) -> BigInt {
        weak_apply(self, x)
    }
}

pub fn gen_apply(t: &GenCollatz, x: &BigInt) -> BigInt {
    let i = usize::try_from(x.mod_floor(&t.d)).expect("residue below modulus");
    let num = &t.m[i] * x - &t.r[i];
    debug_assert!(num.is_multiple_of(&t.d));
    num / &t.d
}

pub fn weak_apply(t: &WeakCollatz, x: &BigInt) -> BigInt {
    (&t.m * x - &t.a).div_floor(&t.d)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitOutcome {
    /// `m T^k(n) ≡ a (mod d)` first holds at `step`.
    ReachedTarget { step: usize },
    /// `prefix[first_index]` recurs `period` steps later.
    EnteredCycle { first_index: usize, period: usize },
    ExceededSteps,
    ExceededBound,
}

impl OrbitOutcome {
    pub fn name(&self) -> &'static str {
        match self {
            OrbitOutcome::ReachedTarget { .. } => "reached-target",
            OrbitOutcome::EnteredCycle { .. } => "entered-cycle",
            OrbitOutcome::ExceededSteps => "exceeded-steps",
            OrbitOutcome::ExceededBound => "exceeded-bound",
        }
    }

    pub fn is_conclusive(&self) -> bool {
        matches!(self, OrbitOutcome::ReachedTarget { .. } | OrbitOutcome::EnteredCycle { .. })
    }
}

/// `prefix[k] = T^k(n)`, ending at the value that decided the outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitResult {
    pub outcome: OrbitOutcome,
    pub prefix: Vec<BigInt>,
}

pub fn orbit(t: &impl Mapping, n: &BigInt, max_steps: usize, abs_bound: &BigInt) -> OrbitResult {
    iterate(t, n, max_steps, abs_bound, |_| false)
}

pub fn reachability_scan(t: &WeakCollatz, n: &BigInt, max_steps: usize, abs_bound: &BigInt) -> OrbitResult {
    iterate(t, n, max_steps, abs_bound, |x| t.on_target(x))
}

fn iterate(
    t: &impl Mapping,
    n: &BigInt,
    max_steps: usize,
    abs_bound: &BigInt,
    target: impl Fn(&BigInt) -> bool,
) -> OrbitResult {
    let mut prefix = vec![n.clone()];
    let mut seen = HashMap::from([(n.clone(), 0usize)]);
    let done = |outcome, prefix| OrbitResult { outcome, prefix };
    if target(n) {
        return done(OrbitOutcome::ReachedTarget { step: 0 }, prefix);
    }
    if n.abs() > *abs_bound {
        return done(OrbitOutcome::ExceededBound, prefix);
    }
    let mut x = n.clone();
    for k in 1..=max_steps {
        x = t.apply(&x);
        prefix.push(x.clone());
        if target(&x) {
            return done(OrbitOutcome::ReachedTarget { step: k }, prefix);
        }
        if let Some(&first_index) = seen.get(&x) {
            return done(OrbitOutcome::EnteredCycle { first_index, period: k - first_index }, prefix);
        }
        if x.abs() > *abs_bound {
            return done(OrbitOutcome::ExceededBound, prefix);
        }
        seen.insert(x.clone(), k);
    }
    done(OrbitOutcome::ExceededSteps, prefix)
}

/// Counts of `T^k(n) mod d^alpha` for `k < steps`.
pub fn residue_histogram(t: &impl Mapping, n: &BigInt, steps: usize, alpha: u32) -> BTreeMap<BigInt, u64> {
    assert!(alpha >= 1, "alpha must be positive");
    let modulus: BigInt = Pow::pow(t.modulus(), alpha);
    let mut hist = BTreeMap::new();
    let mut x = n.clone();
    for k in 0..steps {
        if k > 0 {
            x = t.apply(&x);
        }
        *hist.entry(x.mod_floor(&modulus)).or_insert(0) += 1;
    }
    hist
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Loop whose integer transitions are `(n, T(n))` with `|n|` growing in
/// the chosen direction and `m n ≢ a (mod d)`.
pub fn to_slc(t: &WeakCollatz, sign: Sign) -> Result<HPoly, CollatzError> {
    if t.m <= t.d {
        return Err(CollatzError::PreconditionMDnotGreater { m: t.m.clone(), d: t.d.clone() });
    }
    let (m, d, a) = (&t.m, &t.d, &t.a);
    let mut rows = vec![
        Constraint::new(m.clone(), -d, a + d - BigInt::one()),
        Constraint::new(-m, d.clone(), -a - BigInt::one()),
    ];
    rows.extend(match sign {
        Sign::Plus => [Constraint::new(-1, 0, -1), Constraint::new(1, -1, -1)],
        Sign::Minus => [Constraint::new(1, 0, -1), Constraint::new(-1, 1, -1)],
    });
    Ok(HPoly::new(rows))
}
