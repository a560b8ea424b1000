//! Evolutionary dynamics: rounds of the game followed by Fermi imitation.
//!
//! After each round, every agent picks one neighbor uniformly and adopts
//! its state with probability `1/(1 + exp((R_i - R_j + tau)/kappa))`,
//! where `tau` is the cost of a state change and `kappa` the noise. The
//! synchronous scheduler (default) updates all agents from the same
//! pre-update returns; the asynchronous one performs `n` elementary
//! updates per sweep with freshly recomputed returns.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Network;
use crate::payoff::{
    agent_return, attractiveness, build_investment_operator, build_sharing_operator,
    evaluate_into, PayoffResult, StateVector,
};

/// Which scheduler advances the population.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateMode {
    Synchronous,
    Asynchronous,
}

/// Full parameter set for one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Interest rate applied to every pool's capital.
    pub r: f64,
    /// Investment strategy exponent of the attractiveness profile.
    pub alpha: f64,
    /// Cost of a state change in the Fermi rule.
    pub tau: f64,
    /// Noise of the Fermi rule.
    pub kappa: f64,
    /// Maximum number of generations to simulate.
    pub generations: usize,
    /// Generations discarded before equilibrium averaging.
    pub transient: usize,
    /// Probability that an agent starts as a cooperator.
    pub init_coop_density: f64,
    pub update_mode: UpdateMode,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> SimConfig {
        SimConfig {
            r: 1.0,
            alpha: 0.0,
            tau: 0.1,
            kappa: 0.1,
            generations: 25_000,
            transient: 20_000,
            init_coop_density: 0.5,
            update_mode: UpdateMode::Synchronous,
            seed: 0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.r.is_finite() || self.r < 0.0 {
            return Err(Error::InvalidSpec(format!("r must be >= 0, got {}", self.r)));
        }
        if !self.alpha.is_finite() {
            return Err(Error::InvalidSpec("alpha must be finite".into()));
        }
        if !(self.tau > 0.0) {
            return Err(Error::InvalidSpec(format!("tau must be > 0, got {}", self.tau)));
        }
        if !(self.kappa >= 0.0) {
            return Err(Error::InvalidSpec(format!(
                "kappa must be >= 0, got {}",
                self.kappa
            )));
        }
        if self.transient >= self.generations {
            return Err(Error::InvalidSpec(format!(
                "transient {} must be below generations {}",
                self.transient, self.generations
            )));
        }
        if !(0.0..=1.0).contains(&self.init_coop_density) {
            return Err(Error::InvalidSpec(format!(
                "init_coop_density {} outside [0,1]",
                self.init_coop_density
            )));
        }
        Ok(())
    }
}

/// Probability that an agent with return `r_i` adopts the state of a
/// neighbor with return `r_j`.
///
/// At `kappa = 0` the rule is deterministic: adopt iff the neighbor's
/// advantage exceeds the switching cost, with a coin flip exactly at the
/// cost. Exponent overflow saturates to 0 or 1.
pub fn fermi_prob(r_i: f64, r_j: f64, tau: f64, kappa: f64) -> f64 {
    if kappa == 0.0 {
        let gain = r_j - r_i;
        return if gain > tau {
            1.0
        } else if gain == tau {
            0.5
        } else {
            0.0
        };
    }
    let x = (r_i - r_j + tau) / kappa;
    if x > 700.0 {
        0.0
    } else if x < -700.0 {
        1.0
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// One synchronous generation: every agent samples a neighbor and decides
/// from the shared pre-update returns. Returns the new state and a flag
/// per agent marking an actual state change.
pub fn step_synchronous(
    net: &Network,
    state: &StateVector,
    returns: &[f64],
    tau: f64,
    kappa: f64,
    rng: &mut impl Rng,
) -> (StateVector, Vec<bool>) {
    let mut next = state.clone();
    let mut changed = vec![false; state.len()];
    step_synchronous_into(net, state, returns, tau, kappa, rng, &mut next, &mut changed);
    (next, changed)
}

/// In-place synchronous step; returns the change in cooperator count.
fn step_synchronous_into(
    net: &Network,
    state: &StateVector,
    returns: &[f64],
    tau: f64,
    kappa: f64,
    rng: &mut impl Rng,
    next: &mut StateVector,
    changed: &mut [bool],
) -> i64 {
    let mut delta = 0i64;
    for i in 0..state.len() {
        let nbrs = net.neighbors(i);
        changed[i] = false;
        let s_i = state.get(i);
        next.set(i, s_i);
        if nbrs.is_empty() {
            continue;
        }
        let j = nbrs[rng.random_range(0..nbrs.len())] as usize;
        let s_j = state.get(j);
        if s_j == s_i {
            continue;
        }
        let p = fermi_prob(returns[i], returns[j], tau, kappa);
        if rng.random::<f64>() < p {
            next.set(i, s_j);
            changed[i] = true;
            delta += if s_j == 1 { 1 } else { -1 };
        }
    }
    delta
}

/// One asynchronous Monte Carlo sweep: `n` elementary updates, each
/// recomputing the two agents' returns from the current state. Mutates
/// the state in place and returns per-agent change flags for the sweep.
pub fn step_asynchronous(
    net: &Network,
    prof: &crate::payoff::AttractivenessProfile,
    state: &mut StateVector,
    r: f64,
    tau: f64,
    kappa: f64,
    rng: &mut impl Rng,
) -> Vec<bool> {
    let mut changed = vec![false; state.len()];
    step_asynchronous_into(net, prof, state, r, tau, kappa, rng, &mut changed);
    changed
}

#[allow(clippy::too_many_arguments)]
fn step_asynchronous_into(
    net: &Network,
    prof: &crate::payoff::AttractivenessProfile,
    state: &mut StateVector,
    r: f64,
    tau: f64,
    kappa: f64,
    rng: &mut impl Rng,
    changed: &mut [bool],
) -> i64 {
    let n = state.len();
    let mut delta = 0i64;
    for _ in 0..n {
        let i = rng.random_range(0..n);
        let nbrs = net.neighbors(i);
        if nbrs.is_empty() {
            continue;
        }
        let j = nbrs[rng.random_range(0..nbrs.len())] as usize;
        let s_i = state.get(i);
        let s_j = state.get(j);
        if s_j == s_i {
            continue;
        }
        let r_i = agent_return(net, prof, state, r, i);
        let r_j = agent_return(net, prof, state, r, j);
        let p = fermi_prob(r_i, r_j, tau, kappa);
        if rng.random::<f64>() < p {
            state.set(i, s_j);
            changed[i] = true;
            delta += if s_j == 1 { 1 } else { -1 };
        }
    }
    delta
}

/// Which uniform state a run collapsed into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbsorbedState {
    AllCooperate,
    AllDefect,
}

/// Per-generation record of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Cooperator frequency indexed by generation, `rho_c[0]` being the
    /// initial arrangement. Padded with the absorbed value after early
    /// termination, so its length is always `generations + 1`.
    pub rho_c: Vec<f64>,
    pub final_state: StateVector,
    /// Set when the run hit a uniform state, with the generation index.
    pub absorbed: Option<(AbsorbedState, usize)>,
}

/// How often each agent actually changed state.
#[derive(Debug, Clone, PartialEq)]
pub struct UpdateStats {
    pub change_count: Vec<u32>,
    /// Generations actually stepped (absorbed runs stop early).
    pub generations_observed: u32,
}

impl UpdateStats {
    /// Fraction of observed generations in which agent `i` changed state.
    pub fn frequency(&self, i: usize) -> f64 {
        if self.generations_observed == 0 {
            0.0
        } else {
            self.change_count[i] as f64 / self.generations_observed as f64
        }
    }
}

fn absorbed_kind(coop: usize, n: usize) -> Option<AbsorbedState> {
    if coop == 0 {
        Some(AbsorbedState::AllDefect)
    } else if coop == n {
        Some(AbsorbedState::AllCooperate)
    } else {
        None
    }
}

/// Runs one full simulation: random initial arrangement, one round of the
/// game plus one scheduler step per generation, early stop on absorption.
pub fn run(net: &Network, config: &SimConfig) -> Result<(Trajectory, UpdateStats)> {
    config.validate()?;
    let n = net.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut state = StateVector::random(n, config.init_coop_density, &mut rng);
    let mut coop = state.cooperator_count();
    let mut rho_c = Vec::with_capacity(config.generations + 1);
    rho_c.push(coop as f64 / n as f64);
    let mut change_count = vec![0u32; n];
    let mut changed = vec![false; n];
    let mut observed = 0u32;
    let mut absorbed = absorbed_kind(coop, n).map(|k| (k, 0));

    let prof = attractiveness(net, config.alpha);
    match config.update_mode {
        UpdateMode::Synchronous => {
            let inv = build_investment_operator(net, &prof)?;
            let share = build_sharing_operator(net);
            let mut payoffs = PayoffResult::zeros(n);
            let mut next = state.clone();
            for t in 1..=config.generations {
                if absorbed.is_some() {
                    break;
                }
                evaluate_into(&inv, &share, &state, config.r, &mut payoffs);
                let delta = step_synchronous_into(
                    net,
                    &state,
                    &payoffs.ret,
                    config.tau,
                    config.kappa,
                    &mut rng,
                    &mut next,
                    &mut changed,
                );
                std::mem::swap(&mut state, &mut next);
                coop = (coop as i64 + delta) as usize;
                observed += 1;
                for (count, &flip) in change_count.iter_mut().zip(&changed) {
                    *count += u32::from(flip);
                }
                rho_c.push(coop as f64 / n as f64);
                absorbed = absorbed_kind(coop, n).map(|k| (k, t));
            }
        }
        UpdateMode::Asynchronous => {
            for t in 1..=config.generations {
                if absorbed.is_some() {
                    break;
                }
                changed.fill(false);
                let delta = step_asynchronous_into(
                    net,
                    &prof,
                    &mut state,
                    config.r,
                    config.tau,
                    config.kappa,
                    &mut rng,
                    &mut changed,
                );
                coop = (coop as i64 + delta) as usize;
                observed += 1;
                for (count, &flip) in change_count.iter_mut().zip(&changed) {
                    *count += u32::from(flip);
                }
                rho_c.push(coop as f64 / n as f64);
                absorbed = absorbed_kind(coop, n).map(|k| (k, t));
            }
        }
    }

    let last = *rho_c.last().expect("trajectory has an initial entry");
    rho_c.resize(config.generations + 1, last);
    Ok((
        Trajectory {
            rho_c,
            final_state: state,
            absorbed,
        },
        UpdateStats {
            change_count,
            generations_observed: observed,
        },
    ))
}

/// Mean cooperator frequency over the generations after `transient`.
///
/// Absorbed runs are padded with their absorbed value, so this returns
/// that value whenever absorption happened before the window.
pub fn equilibrium_frequency(traj: &Trajectory, transient: usize) -> f64 {
    let start = (transient + 1).min(traj.rho_c.len() - 1);
    let window = &traj.rho_c[start..];
    window.iter().sum::<f64>() / window.len() as f64
}
