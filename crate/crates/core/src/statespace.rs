//! Clique and graph state space, where a deterministic vertex is free in
//! any clique that also holds all of its parents.

use std::fmt;
use std::iter::Sum;
use std::ops::Add;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::chordal::maximal_cliques_chordal;
use crate::graph::{GraphError, UGraph};
use crate::model::Network;

/// Exact, non-negative state space value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct StateSpace(pub BigUint);

impl StateSpace {
    pub fn zero() -> Self {
        StateSpace(BigUint::zero())
    }

    pub fn one() -> Self {
        StateSpace(BigUint::one())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn to_bigint(&self) -> BigInt {
        BigInt::from(self.0.clone())
    }
}

impl From<u64> for StateSpace {
    fn from(v: u64) -> Self {
        StateSpace(BigUint::from(v))
    }
}

impl FromStr for StateSpace {
    type Err = num_bigint::ParseBigIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim().parse().map(StateSpace)
    }
}

impl fmt::Display for StateSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Add for StateSpace {
    type Output = StateSpace;
    fn add(self, rhs: StateSpace) -> StateSpace {
        StateSpace(self.0 + rhs.0)
    }
}

impl Sum for StateSpace {
    fn sum<I: Iterator<Item = StateSpace>>(iter: I) -> StateSpace {
        StateSpace(iter.map(|s| s.0).sum())
    }
}

/// Knobs for how a clique is priced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Scoring {
    /// Observed vertices contribute a factor of 1.
    pub observed_as_unit: bool,
    /// Price every vertex as stochastic (plain product of cardinalities).
    pub ignore_determinism: bool,
}

impl Scoring {
    pub const PLAIN: Scoring = Scoring {
        observed_as_unit: false,
        ignore_determinism: true,
    };
}

/// Deterministic members of `clique` whose whole parent set is inside it.
pub fn free_deterministic(clique: &[usize], net: &Network) -> Vec<usize> {
    let mut members = FixedBitSet::with_capacity(net.len());
    for &v in clique {
        members.insert(v);
    }
    clique
        .iter()
        .copied()
        .filter(|&v| net.is_deterministic(v) && net.parents(v).iter().all(|&p| members.contains(p)))
        .collect()
}

pub fn clique_state_space(clique: &[usize], net: &Network, scoring: Scoring) -> StateSpace {
    let free = if scoring.ignore_determinism {
        Vec::new()
    } else {
        free_deterministic(clique, net)
    };
    let mut product = BigUint::one();
    for &v in clique {
        if free.contains(&v) || (scoring.observed_as_unit && net.vertex(v).observed) {
            continue;
        }
        product *= net.cardinality(v);
    }
    StateSpace(product)
}

/// Sum of clique state spaces over the maximal cliques of a chordal graph.
pub fn graph_state_space(
    g: &UGraph,
    net: &Network,
    scoring: Scoring,
) -> Result<StateSpace, GraphError> {
    let cliques = maximal_cliques_chordal(g)?;
    Ok(cliques_state_space(&cliques, net, scoring))
}

pub fn cliques_state_space(cliques: &[Vec<usize>], net: &Network, scoring: Scoring) -> StateSpace {
    cliques
        .iter()
        .map(|c| clique_state_space(c, net, scoring))
        .sum()
}
