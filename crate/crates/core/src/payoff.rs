//! Capital flow and payoff evaluation.
//!
//! A cooperator distributes one unit of capital across the pools in its
//! closed neighborhood proportionally to pool attractiveness
//! `(k+1)^alpha`; every pool multiplies its take by the interest rate `r`
//! and shares equally among its members. Both steps are linear in the
//! state vector, so the round is two sparse matrix-vector products:
//! `C = A s` (investment) and `P = r B C` (sharing), with net returns
//! `R = P - s`. [`brute_force_payoffs`] evaluates the same quantities
//! agent by agent, straight from the sums, as an independent oracle.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Network;

/// Per-pool attractiveness `(k_i + 1)^alpha`, with the per-portfolio
/// normalizers cached.
#[derive(Debug, Clone)]
pub struct AttractivenessProfile {
    alpha: f64,
    values: Vec<f64>,
    denoms: Vec<f64>,
}

impl AttractivenessProfile {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Attractiveness of pool `i`.
    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    /// Total attractiveness of agent `i`'s portfolio (its closed
    /// neighborhood); the denominator of the investment fractions.
    pub fn denom(&self, i: usize) -> f64 {
        self.denoms[i]
    }
}

/// Computes `(k_i + 1)^alpha` for every agent as `exp(alpha * ln(k_i + 1))`
/// so positive and negative `alpha` go through the same code path.
pub fn attractiveness(net: &Network, alpha: f64) -> AttractivenessProfile {
    let n = net.node_count();
    let values: Vec<f64> = (0..n)
        .map(|i| (alpha * ((net.degree(i) + 1) as f64).ln()).exp())
        .collect();
    let denoms: Vec<f64> = (0..n)
        .map(|j| {
            let mut acc = values[j];
            for &l in net.neighbors(j) {
                acc += values[l as usize];
            }
            acc
        })
        .collect();
    AttractivenessProfile {
        alpha,
        values,
        denoms,
    }
}

/// Compressed sparse column matrix; both payoff operators share this
/// layout, with one column per investing agent.
#[derive(Debug, Clone, PartialEq)]
struct Csc {
    n: usize,
    col_ptr: Vec<usize>,
    rows: Vec<u32>,
    vals: Vec<f64>,
}

impl Csc {
    /// Builds the closed-neighborhood pattern with per-column values from
    /// `value_of(row, col)`; rows within a column are ascending.
    fn from_closed_neighborhoods(net: &Network, value_of: impl Fn(usize, usize) -> f64) -> Csc {
        let n = net.node_count();
        let mut col_ptr = Vec::with_capacity(n + 1);
        let mut rows = Vec::with_capacity(2 * net.edge_count() + n);
        let mut vals = Vec::with_capacity(rows.capacity());
        col_ptr.push(0);
        for j in 0..n {
            let mut self_placed = false;
            for &i in net.neighbors(j) {
                if !self_placed && (j as u32) < i {
                    rows.push(j as u32);
                    vals.push(value_of(j, j));
                    self_placed = true;
                }
                rows.push(i);
                vals.push(value_of(i as usize, j));
            }
            if !self_placed {
                rows.push(j as u32);
                vals.push(value_of(j, j));
            }
            col_ptr.push(rows.len());
        }
        Csc {
            n,
            col_ptr,
            rows,
            vals,
        }
    }

    fn column(&self, j: usize) -> impl Iterator<Item = (u32, f64)> + '_ {
        let lo = self.col_ptr[j];
        let hi = self.col_ptr[j + 1];
        self.rows[lo..hi]
            .iter()
            .copied()
            .zip(self.vals[lo..hi].iter().copied())
    }

    fn column_len(&self, j: usize) -> usize {
        self.col_ptr[j + 1] - self.col_ptr[j]
    }

    fn column_sum(&self, j: usize) -> f64 {
        self.vals[self.col_ptr[j]..self.col_ptr[j + 1]].iter().sum()
    }

    /// `out = scale * M x`, scattering column by column.
    fn mul_scaled(&self, x: &[f64], scale: f64, out: &mut [f64]) {
        out.fill(0.0);
        for j in 0..self.n {
            let m = scale * x[j];
            if m == 0.0 {
                continue;
            }
            let lo = self.col_ptr[j];
            let hi = self.col_ptr[j + 1];
            for idx in lo..hi {
                out[self.rows[idx] as usize] += self.vals[idx] * m;
            }
        }
    }

    /// `out = M s` for a binary state vector.
    fn mul_state(&self, s: &StateVector, out: &mut [f64]) {
        out.fill(0.0);
        for j in 0..self.n {
            if s.get(j) == 0 {
                continue;
            }
            let lo = self.col_ptr[j];
            let hi = self.col_ptr[j + 1];
            for idx in lo..hi {
                out[self.rows[idx] as usize] += self.vals[idx];
            }
        }
    }

    fn max_abs_diff(&self, other: &Csc) -> Option<f64> {
        if self.n != other.n || self.col_ptr != other.col_ptr || self.rows != other.rows {
            return None;
        }
        Some(
            self.vals
                .iter()
                .zip(&other.vals)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        )
    }
}

/// Column-stochastic investment operator: entry `(i, j)` is the fraction
/// of agent `j`'s capital sent to pool `i`, nonzero exactly on `j`'s
/// closed neighborhood.
#[derive(Debug, Clone, PartialEq)]
pub struct InvestmentOperator {
    csc: Csc,
}

/// Column-stochastic sharing operator: entry `(i, j)` is `1/(k_j + 1)` on
/// the closed-neighborhood pattern, the equal share pool `j` pays each of
/// its members.
#[derive(Debug, Clone, PartialEq)]
pub struct SharingOperator {
    csc: Csc,
}

macro_rules! operator_accessors {
    ($ty:ty) => {
        impl $ty {
            pub fn node_count(&self) -> usize {
                self.csc.n
            }

            /// Nonzero entries of column `j` as `(row, value)`, rows ascending.
            pub fn column(&self, j: usize) -> impl Iterator<Item = (u32, f64)> + '_ {
                self.csc.column(j)
            }

            pub fn column_nonzeros(&self, j: usize) -> usize {
                self.csc.column_len(j)
            }

            pub fn column_sum(&self, j: usize) -> f64 {
                self.csc.column_sum(j)
            }
        }
    };
}

operator_accessors!(InvestmentOperator);
operator_accessors!(SharingOperator);

impl InvestmentOperator {
    /// `out = A s`: pool capital for one round.
    pub fn apply(&self, s: &StateVector, out: &mut [f64]) {
        self.csc.mul_state(s, out);
    }

    /// Largest entrywise difference to `other`, or `None` if the sparsity
    /// patterns differ.
    pub fn max_abs_entry_diff(&self, other: &InvestmentOperator) -> Option<f64> {
        self.csc.max_abs_diff(&other.csc)
    }
}

impl SharingOperator {
    /// `out = scale * B x`: scaled equal-share redistribution.
    pub fn apply_scaled(&self, x: &[f64], scale: f64, out: &mut [f64]) {
        self.csc.mul_scaled(x, scale, out);
    }
}

/// Builds the investment operator `a_ij = A_i / sum_{l in N(j)} A_l` on
/// the closed-neighborhood pattern.
pub fn build_investment_operator(
    net: &Network,
    prof: &AttractivenessProfile,
) -> Result<InvestmentOperator> {
    if prof.len() != net.node_count() {
        return Err(Error::InvalidInput(format!(
            "profile has {} agents, network has {}",
            prof.len(),
            net.node_count()
        )));
    }
    let csc = Csc::from_closed_neighborhoods(net, |i, j| prof.values[i] / prof.denoms[j]);
    Ok(InvestmentOperator { csc })
}

/// Builds the sharing operator `b_ij = 1/(k_j + 1)`; independent of alpha.
pub fn build_sharing_operator(net: &Network) -> SharingOperator {
    let csc = Csc::from_closed_neighborhoods(net, |_i, j| 1.0 / (net.degree(j) + 1) as f64);
    SharingOperator { csc }
}

/// Binary strategies: 1 is a cooperator, 0 a defector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateVector(Vec<u8>);

impl StateVector {
    pub fn from_vec(v: Vec<u8>) -> Result<StateVector> {
        if let Some(bad) = v.iter().find(|&&s| s > 1) {
            return Err(Error::InvalidInput(format!("state value {bad} not in {{0,1}}")));
        }
        Ok(StateVector(v))
    }

    pub fn all_cooperate(n: usize) -> StateVector {
        StateVector(vec![1; n])
    }

    pub fn all_defect(n: usize) -> StateVector {
        StateVector(vec![0; n])
    }

    /// Each agent cooperates independently with probability `density`.
    pub fn random(n: usize, density: f64, rng: &mut impl Rng) -> StateVector {
        StateVector(
            (0..n)
                .map(|_| u8::from(rng.random::<f64>() < density))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, s: u8) {
        debug_assert!(s <= 1);
        self.0[i] = s;
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn cooperator_count(&self) -> usize {
        self.0.iter().filter(|&&s| s == 1).count()
    }

    pub fn cooperator_fraction(&self) -> f64 {
        self.cooperator_count() as f64 / self.len() as f64
    }

    /// `Some(state)` if every agent holds the same state (absorbing).
    pub fn uniform_state(&self) -> Option<u8> {
        let first = *self.0.first()?;
        self.0.iter().all(|&s| s == first).then_some(first)
    }
}

/// Pool capital, per-agent payoff, and net returns for one round.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffResult {
    /// Capital accumulated by each pool: `C = A s`.
    pub capital: Vec<f64>,
    /// Aggregate payoff of each agent: `P = r B C`.
    pub payoff: Vec<f64>,
    /// Net return of each agent: `R = P - s`.
    pub ret: Vec<f64>,
}

impl PayoffResult {
    pub fn zeros(n: usize) -> PayoffResult {
        PayoffResult {
            capital: vec![0.0; n],
            payoff: vec![0.0; n],
            ret: vec![0.0; n],
        }
    }
}

/// One round of the game through the sparse operators.
pub fn evaluate(
    inv: &InvestmentOperator,
    share: &SharingOperator,
    s: &StateVector,
    r: f64,
) -> Result<PayoffResult> {
    let n = inv.node_count();
    if share.node_count() != n || s.len() != n {
        return Err(Error::InvalidInput(format!(
            "dimension mismatch: investment {n}, sharing {}, state {}",
            share.node_count(),
            s.len()
        )));
    }
    let mut out = PayoffResult::zeros(n);
    evaluate_into(inv, share, s, r, &mut out);
    Ok(out)
}

/// As [`evaluate`], reusing the caller's buffers. Sizes must already agree.
pub fn evaluate_into(
    inv: &InvestmentOperator,
    share: &SharingOperator,
    s: &StateVector,
    r: f64,
    out: &mut PayoffResult,
) {
    inv.apply(s, &mut out.capital);
    share.apply_scaled(&out.capital, r, &mut out.payoff);
    for i in 0..s.len() {
        out.ret[i] = out.payoff[i] - s.get(i) as f64;
    }
}

/// Independent oracle: evaluates the capital, payoff, and return sums
/// directly per agent, without building operators.
pub fn brute_force_payoffs(net: &Network, alpha: f64, s: &StateVector, r: f64) -> PayoffResult {
    let n = net.node_count();
    let attract: Vec<f64> = (0..n).map(|i| ((net.degree(i) + 1) as f64).powf(alpha)).collect();
    let denom: Vec<f64> = (0..n)
        .map(|j| {
            attract[j]
                + net
                    .neighbors(j)
                    .iter()
                    .map(|&l| attract[l as usize])
                    .sum::<f64>()
        })
        .collect();
    let mut out = PayoffResult::zeros(n);
    // Pool accumulation: every pool i collects from the investors in its
    // community, each sending the attractiveness-weighted slice of one unit.
    for i in 0..n {
        let mut c = attract[i] * s.get(i) as f64 / denom[i];
        for &j in net.neighbors(i) {
            c += attract[i] * s.get(j as usize) as f64 / denom[j as usize];
        }
        out.capital[i] = c;
    }
    // Equal sharing of each pool's interest among its members.
    for i in 0..n {
        let mut p = r * out.capital[i] / (net.degree(i) + 1) as f64;
        for &j in net.neighbors(i) {
            p += r * out.capital[j as usize] / (net.degree(j as usize) + 1) as f64;
        }
        out.payoff[i] = p;
        out.ret[i] = p - s.get(i) as f64;
    }
    out
}

/// Net return of a single agent, computed fresh from the current state.
///
/// Used by the asynchronous scheduler, which needs up-to-date returns for
/// one agent pair without a full round evaluation.
pub fn agent_return(
    net: &Network,
    prof: &AttractivenessProfile,
    s: &StateVector,
    r: f64,
    i: usize,
) -> f64 {
    let pool_capital = |j: usize| -> f64 {
        let mut c = prof.values[j] * s.get(j) as f64 / prof.denoms[j];
        for &l in net.neighbors(j) {
            c += prof.values[j] * s.get(l as usize) as f64 / prof.denoms[l as usize];
        }
        c
    };
    let mut p = r * pool_capital(i) / (net.degree(i) + 1) as f64;
    for &j in net.neighbors(i) {
        p += r * pool_capital(j as usize) / (net.degree(j as usize) + 1) as f64;
    }
    p - s.get(i) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_lattice, GraphSpec, Network};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn star3() -> Network {
        Network::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap()
    }

    fn random_connected(n: usize, rng: &mut impl Rng) -> Network {
        let mut edges = std::collections::BTreeSet::new();
        for v in 1..n as u32 {
            let u = rng.random_range(0..v);
            edges.insert((u, v));
        }
        for _ in 0..n {
            let a = rng.random_range(0..n as u32);
            let b = rng.random_range(0..n as u32);
            if a != b {
                edges.insert((a.min(b), a.max(b)));
            }
        }
        let edges: Vec<_> = edges.into_iter().collect();
        Network::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn attractiveness_examples() {
        let lattice = build_lattice(3).unwrap();
        let flat = attractiveness(&lattice, 0.0);
        assert!((0..9).all(|i| flat.value(i) == 1.0));

        let s3 = star3();
        let linear = attractiveness(&s3, 1.0);
        assert!((linear.value(0) - 4.0).abs() < 1e-12);
        assert!((linear.value(1) - 2.0).abs() < 1e-12);

        let cycle = Network::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let inv_sq = attractiveness(&cycle, -2.0);
        assert!((inv_sq.value(0) - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn lattice_investment_entries_are_fifths_for_any_alpha() {
        let net = build_lattice(5).unwrap();
        for alpha in [-2.0, -1.0, 0.0, 1.0, 2.5] {
            let prof = attractiveness(&net, alpha);
            let inv = build_investment_operator(&net, &prof).unwrap();
            for j in 0..net.node_count() {
                assert_eq!(inv.column_nonzeros(j), 5);
                assert!((inv.column_sum(j) - 1.0).abs() < 1e-12);
                for (_, v) in inv.column(j) {
                    assert!((v - 0.2).abs() < 1e-15, "alpha={alpha} entry {v}");
                }
            }
        }
    }

    #[test]
    fn star_investment_hand_values() {
        let net = star3();
        let prof = attractiveness(&net, 1.0);
        let inv = build_investment_operator(&net, &prof).unwrap();
        // Leaf column: the center pool (attractiveness 4) gets 2/3, the
        // leaf's own pool (attractiveness 2) gets 1/3.
        let col1: Vec<(u32, f64)> = inv.column(1).collect();
        assert_eq!(col1.len(), 2);
        assert_eq!(col1[0].0, 0);
        assert!((col1[0].1 - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(col1[1].0, 1);
        assert!((col1[1].1 - 1.0 / 3.0).abs() < 1e-12);
        // Center column: own pool 4/10, each leaf pool 2/10.
        let col0: Vec<(u32, f64)> = inv.column(0).collect();
        assert_eq!(col0.len(), 4);
        assert!((col0[0].1 - 0.4).abs() < 1e-12);
        for &(row, v) in &col0[1..] {
            assert!(row >= 1);
            assert!((v - 0.2).abs() < 1e-12);
        }
    }

    #[test]
    fn flat_alpha_investment_matches_sharing_values() {
        let net = GraphSpec::ba(40, 4, 2, 11).build().unwrap();
        let prof = attractiveness(&net, 0.0);
        let inv = build_investment_operator(&net, &prof).unwrap();
        let share = build_sharing_operator(&net);
        for j in 0..net.node_count() {
            let a: Vec<(u32, f64)> = inv.column(j).collect();
            let b: Vec<(u32, f64)> = share.column(j).collect();
            // With flat attractiveness, a_ij = 1/(k_j+1) on the pattern,
            // which is column j of B transposed onto rows i in N(j); the
            // patterns coincide because the community relation is symmetric.
            assert_eq!(a.len(), b.len());
            for ((ri, vi), (rj, vj)) in a.iter().zip(&b) {
                assert_eq!(ri, rj);
                let expect = 1.0 / (net.degree(j) + 1) as f64;
                assert!((vi - expect).abs() < 1e-12);
                assert!((vj - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn sharing_operator_values() {
        let net = star3();
        let share = build_sharing_operator(&net);
        for (_, v) in share.column(0) {
            assert!((v - 0.25).abs() < 1e-15);
        }
        for j in 1..4 {
            assert_eq!(share.column_nonzeros(j), 2);
            for (_, v) in share.column(j) {
                assert!((v - 0.5).abs() < 1e-15);
            }
        }
        let k5 = GraphSpec::ba(5, 5, 2, 0).build().unwrap();
        let dense = build_sharing_operator(&k5);
        for j in 0..5 {
            assert_eq!(dense.column_nonzeros(j), 5);
            for (_, v) in dense.column(j) {
                assert!((v - 0.2).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn evaluate_lattice_all_cooperate() {
        let net = build_lattice(6).unwrap();
        let prof = attractiveness(&net, -1.0);
        let inv = build_investment_operator(&net, &prof).unwrap();
        let share = build_sharing_operator(&net);
        let s = StateVector::all_cooperate(net.node_count());
        let res = evaluate(&inv, &share, &s, 3.8).unwrap();
        for i in 0..net.node_count() {
            assert!((res.capital[i] - 1.0).abs() < 1e-12);
            assert!((res.payoff[i] - 3.8).abs() < 1e-12);
            assert!((res.ret[i] - 2.8).abs() < 1e-12);
        }
    }

    #[test]
    fn evaluate_star_all_cooperate_hand_values() {
        let net = star3();
        let prof = attractiveness(&net, 1.0);
        let inv = build_investment_operator(&net, &prof).unwrap();
        let share = build_sharing_operator(&net);
        let s = StateVector::all_cooperate(4);
        let res = evaluate(&inv, &share, &s, 1.0).unwrap();
        assert!((res.capital[0] - 2.4).abs() < 1e-12);
        for leaf in 1..4 {
            assert!((res.capital[leaf] - 8.0 / 15.0).abs() < 1e-12);
            assert!((res.payoff[leaf] - 13.0 / 15.0).abs() < 1e-12);
        }
        assert!((res.payoff[0] - 1.4).abs() < 1e-12);
        let total: f64 = res.payoff.iter().sum();
        assert!((total - 4.0).abs() < 1e-12);
    }

    #[test]
    fn evaluate_all_defect_is_zero() {
        let net = GraphSpec::ba(50, 5, 2, 3).build().unwrap();
        let prof = attractiveness(&net, -2.0);
        let inv = build_investment_operator(&net, &prof).unwrap();
        let share = build_sharing_operator(&net);
        let s = StateVector::all_defect(50);
        let res = evaluate(&inv, &share, &s, 4.0).unwrap();
        assert!(res.capital.iter().all(|&c| c == 0.0));
        assert!(res.payoff.iter().all(|&p| p == 0.0));
        assert!(res.ret.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let small = build_lattice(3).unwrap();
        let big = build_lattice(4).unwrap();
        let prof_small = attractiveness(&small, 1.0);
        assert!(build_investment_operator(&big, &prof_small).is_err());

        let inv = build_investment_operator(&small, &prof_small).unwrap();
        let share = build_sharing_operator(&small);
        let s = StateVector::all_cooperate(16);
        assert!(evaluate(&inv, &share, &s, 1.0).is_err());
    }

    #[test]
    fn matrix_route_matches_brute_force_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for case in 0..30 {
            let n = rng.random_range(2..=40);
            let net = random_connected(n, &mut rng);
            let share = build_sharing_operator(&net);
            for alpha in [-2.0, -1.0, 0.0, 1.0, 2.0] {
                let prof = attractiveness(&net, alpha);
                let inv = build_investment_operator(&net, &prof).unwrap();
                let s = StateVector::random(n, 0.5, &mut rng);
                let r = rng.random_range(0.0..6.0);
                let fast = evaluate(&inv, &share, &s, r).unwrap();
                let slow = brute_force_payoffs(&net, alpha, &s, r);
                for i in 0..n {
                    assert!(
                        (fast.capital[i] - slow.capital[i]).abs() <= 1e-12
                            && (fast.payoff[i] - slow.payoff[i]).abs() <= 1e-12
                            && (fast.ret[i] - slow.ret[i]).abs() <= 1e-12,
                        "case {case} agent {i} alpha {alpha}"
                    );
                }
            }
        }
    }

    #[test]
    fn agent_return_matches_full_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let net = random_connected(25, &mut rng);
        let prof = attractiveness(&net, -1.5);
        let inv = build_investment_operator(&net, &prof).unwrap();
        let share = build_sharing_operator(&net);
        let s = StateVector::random(25, 0.4, &mut rng);
        let res = evaluate(&inv, &share, &s, 2.3).unwrap();
        for i in 0..25 {
            let local = agent_return(&net, &prof, &s, 2.3, i);
            assert!((local - res.ret[i]).abs() < 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn capital_and_payoff_are_conserved(
            seed in 0u64..1000,
            n in 2usize..50,
            alpha in -2.5f64..2.5,
            r in 0.0f64..8.0,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let net = random_connected(n, &mut rng);
            let prof = attractiveness(&net, alpha);
            let inv = build_investment_operator(&net, &prof).unwrap();
            let share = build_sharing_operator(&net);
            let s = StateVector::random(n, 0.5, &mut rng);
            for j in 0..n {
                prop_assert!((inv.column_sum(j) - 1.0).abs() < 1e-12);
                prop_assert!((share.column_sum(j) - 1.0).abs() < 1e-12);
                prop_assert_eq!(inv.column_nonzeros(j), net.degree(j) + 1);
            }
            let res = evaluate(&inv, &share, &s, r).unwrap();
            let coop = s.cooperator_count() as f64;
            let total_c: f64 = res.capital.iter().sum();
            let total_p: f64 = res.payoff.iter().sum();
            prop_assert!((total_c - coop).abs() <= 1e-12 * coop.max(1.0));
            prop_assert!((total_p - r * coop).abs() <= 1e-9 * (r * coop).max(1.0));
        }

        #[test]
        fn cooperating_never_drains_a_pool(
            seed in 0u64..1000,
            n in 3usize..40,
            alpha in -2.0f64..2.0,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let net = random_connected(n, &mut rng);
            let prof = attractiveness(&net, alpha);
            let inv = build_investment_operator(&net, &prof).unwrap();
            let share = build_sharing_operator(&net);
            let mut s = StateVector::random(n, 0.5, &mut rng);
            let flip = rng.random_range(0..n);
            s.set(flip, 0);
            let before = evaluate(&inv, &share, &s, 1.7).unwrap();
            s.set(flip, 1);
            let after = evaluate(&inv, &share, &s, 1.7).unwrap();
            for i in 0..n {
                prop_assert!(after.capital[i] + 1e-12 >= before.capital[i]);
                prop_assert!(after.payoff[i] + 1e-12 >= before.payoff[i]);
            }
        }
    }
}
