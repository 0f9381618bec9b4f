//! Brute-force ground truth on a bounded window of states.
//!
//! Nothing here shares code with the column or cone machinery: per-row
//! bounds are computed directly with integer floor and ceiling division.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

use crate::poly2::{Constraint, HPoly, Rat};

pub const DEFAULT_BOUND: i64 = 64;
pub const DEFAULT_TRACE_CAP: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("need sign(a - alpha) = sign(b - alpha) != 0")]
    PreconditionSign,
}

/// Integer transitions of a loop with both ends in `[-bound, bound]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionGraph {
    pub bound: i64,
    pub edges: BTreeSet<(i64, i64)>,
}

impl TransitionGraph {
    fn successors(&self) -> BTreeMap<i64, Vec<i64>> {
        let mut adj: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
        for &(x, y) in &self.edges {
            adj.entry(x).or_default().push(y);
        }
        for ys in adj.values_mut() {
            ys.sort_by_key(|&y| magnitude_order(y));
        }
        adj
    }

    /// One `x y` pair per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (x, y) in &self.edges {
            writeln!(out, "{x} {y}").expect("writing to a string");
        }
        out
    }
}

fn magnitude_order(s: i64) -> (u64, i64) {
    (s.unsigned_abs(), s)
}

fn states(bound: i64) -> Vec<i64> {
    let mut v: Vec<i64> = (-bound..=bound).collect();
    v.sort_by_key(|&s| magnitude_order(s));
    v
}

/// Integer successors of `x` as an inclusive range, `None` ends unbounded;
/// `None` overall when there are none.
pub fn successor_range(p: &HPoly, x: &BigInt) -> Option<(Option<BigInt>, Option<BigInt>)> {
    let (mut lo, mut hi): (Option<BigInt>, Option<BigInt>) = (None, None);
    for Constraint { a1, a2, b } in &p.constraints {
        let rhs = b - a1 * x;
        if a2.is_zero() {
            if rhs.is_negative() {
                return None;
            }
        } else if a2.is_positive() {
            let bound = rhs.div_floor(a2);
            hi = Some(hi.map_or(bound.clone(), |h| h.min(bound)));
        } else {
            let bound = div_ceil(&rhs, a2);
            lo = Some(lo.map_or(bound.clone(), |l| l.max(bound)));
        }
    }
    match (&lo, &hi) {
        (Some(l), Some(h)) if l > h => None,
        _ => Some((lo, hi)),
    }
}

fn div_ceil(n: &BigInt, d: &BigInt) -> BigInt {
    -((-n).div_floor(d))
}

pub fn build_graph(p: &HPoly, bound: i64) -> TransitionGraph {
    let mut edges = BTreeSet::new();
    for x in -bound..=bound {
        let Some((lo, hi)) = successor_range(p, &BigInt::from(x)) else {
            continue;
        };
        let lo = lo.and_then(|l| l.to_i64()).map_or(-bound, |l| l.max(-bound));
        let hi = hi.and_then(|h| h.to_i64()).map_or(bound, |h| h.min(bound));
        edges.extend((lo..=hi).map(|y| (x, y)));
    }
    TransitionGraph { bound, edges }
}

/// A directed cycle `s1 -> … -> sk -> s1`, returned as `[s1, …, sk]`.
/// Depth-first search visits states and successors by increasing magnitude.
pub fn find_cycle(g: &TransitionGraph) -> Option<Vec<i64>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let adj = g.successors();
    let mut mark: BTreeMap<i64, Mark> = adj.keys().map(|&s| (s, Mark::New)).collect();
    let empty = Vec::new();
    for root in states(g.bound) {
        if mark.get(&root) != Some(&Mark::New) {
            continue;
        }
        // (state, next successor index)
        let mut stack = vec![(root, 0usize)];
        mark.insert(root, Mark::Open);
        while let Some(&mut (s, ref mut next)) = stack.last_mut() {
            let succ = adj.get(&s).unwrap_or(&empty);
            if *next == succ.len() {
                mark.insert(s, Mark::Done);
                stack.pop();
                continue;
            }
            let t = succ[*next];
            *next += 1;
            match mark.get(&t).copied().unwrap_or(Mark::Done) {
                Mark::Open => {
                    let at = stack.iter().position(|&(u, _)| u == t).expect("open states are on the stack");
                    return Some(stack[at..].iter().map(|&(u, _)| u).collect());
                }
                Mark::New => {
                    mark.insert(t, Mark::Open);
                    stack.push((t, 0));
                }
                Mark::Done => {}
            }
        }
    }
    None
}

/// A path of at most `cap` distinct states whose last state has an integer
/// successor outside the window. Starts are tried by increasing magnitude;
/// each search is breadth-first, so the path is a shortest one.
pub fn find_escape(g: &TransitionGraph, p: &HPoly, cap: usize) -> Option<Vec<i64>> {
    if cap == 0 {
        return None;
    }
    let b = BigInt::from(g.bound);
    let exits: BTreeSet<i64> = (-g.bound..=g.bound)
        .filter(|&x| match successor_range(p, &BigInt::from(x)) {
            Some((lo, hi)) => lo.is_none_or(|l| l < -&b) || hi.is_none_or(|h| h > b),
            None => false,
        })
        .collect();
    if exits.is_empty() {
        return None;
    }
    let adj = g.successors();
    let empty = Vec::new();
    for start in states(g.bound) {
        let mut parent = BTreeMap::from([(start, start)]);
        let mut queue = VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            if exits.contains(&s) {
                let mut path = vec![s];
                while *path.last().unwrap() != start {
                    path.push(parent[path.last().unwrap()]);
                }
                path.reverse();
                if path.len() <= cap {
                    return Some(path);
                }
                break;
            }
            for &t in adj.get(&s).unwrap_or(&empty) {
                if let std::collections::btree_map::Entry::Vacant(e) = parent.entry(t) {
                    e.insert(s);
                    queue.push_back(t);
                }
            }
        }
    }
    None
}

/// The diagonal point `(r, r)` on the segment from `(a, alpha)` to `(alpha, b)`.
pub fn diagonal_collapse(a: &BigInt, alpha: &BigInt, b: &BigInt) -> Result<Rat, OracleError> {
    let (sa, sb) = ((a - alpha).signum(), (b - alpha).signum());
    if sa.is_zero() || sa != sb {
        return Err(OracleError::PreconditionSign);
    }
    let num = b * a - alpha * alpha;
    let den = a + b - BigInt::from(2) * alpha;
    Ok(Rat::new(num, den))
}

/// A loop of `1..=max_rows` rows with every entry, right-hand sides
/// included, uniform in `[-coeff, coeff]`.
pub fn random_slc(rng: &mut impl Rng, max_rows: usize, coeff: i64) -> HPoly {
    let rows = rng.gen_range(1..=max_rows);
    let mut entry = || rng.gen_range(-coeff..=coeff);
    HPoly::new((0..rows).map(|_| Constraint::new(entry(), entry(), entry())).collect())
}
