//! Controlling centrality: the generic rank of the controllability matrix.
//!
//! Column k of W_c is the final state produced by a unit input applied at
//! time k and carried through the remaining snapshots. The matrix entries
//! are polynomials in the contact parameters, and the centrality of a node
//! is the rank those entries take for almost every parameter choice. That
//! generic rank is read off numerically: sample the parameters uniformly
//! from a large prime field and take the rank of the resulting matrix,
//! which matches the generic one with probability at least
//! 1 - d/p (Schwartz-Zippel, d the entry degree, at most T). Repeated
//! trials make a miss astronomically unlikely; the largest trial wins
//! since evaluation can only ever lose rank, never gain it.

use crate::field::{self, add_mod, mul_mod, Matrix, DEFAULT_PRIME};
use crate::seeding;
use crate::temporal_graph::{NodeId, ParamId, SymbolTable, TemporalNetwork, TimeStep};
use crate::{Error, Result};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// One concrete evaluation point: a field value for every contact
/// parameter, plus an interval length per time step (all 1 unless
/// rescaled, and rank-neutral either way).
#[derive(Debug, Clone)]
pub struct FieldAssignment {
    prime: u64,
    seed: u64,
    values: Vec<u64>,
    intervals: Vec<u64>,
}

impl FieldAssignment {
    /// draws a value in 1..prime for every parameter, reproducibly from
    /// the seed
    pub fn sample(symbols: &SymbolTable, horizon: TimeStep, prime: u64, seed: u64) -> Result<Self> {
        field::validate_prime(prime)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..symbols.len()).map(|_| rng.random_range(1..prime)).collect();
        Ok(FieldAssignment {
            prime,
            seed,
            values,
            intervals: vec![1; horizon],
        })
    }

    /// uses pinned values instead of sampled ones, for replaying a known
    /// evaluation point
    pub fn from_values(prime: u64, values: Vec<u64>, horizon: TimeStep) -> Result<Self> {
        field::validate_prime(prime)?;
        if values.iter().any(|&v| v == 0 || v >= prime) {
            return Err(Error::InvalidConfig(
                "parameter values must lie in 1..prime".into(),
            ));
        }
        Ok(FieldAssignment {
            prime,
            seed: 0,
            values,
            intervals: vec![1; horizon],
        })
    }

    /// replaces the unit interval lengths, one per time step
    pub fn with_intervals(mut self, intervals: Vec<u64>) -> Result<Self> {
        if intervals.len() != self.intervals.len() {
            return Err(Error::InvalidConfig(
                "expected one interval length per time step".into(),
            ));
        }
        if intervals.iter().any(|&w| w == 0 || w >= self.prime) {
            return Err(Error::InvalidConfig(
                "interval lengths must lie in 1..prime".into(),
            ));
        }
        self.intervals = intervals;
        Ok(self)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn param_count(&self) -> usize {
        self.values.len()
    }

    pub fn value(&self, id: ParamId) -> u64 {
        self.values[id as usize]
    }

    /// interval length of time step `t` (1-based)
    pub fn interval(&self, t: TimeStep) -> u64 {
        self.intervals[t - 1]
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CentralityConfig {
    pub prime: u64,
    pub trials: usize,
    pub seed: u64,
}

impl Default for CentralityConfig {
    fn default() -> Self {
        CentralityConfig {
            prime: DEFAULT_PRIME,
            trials: 3,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CentralityReport {
    pub node: NodeId,
    /// the centrality: largest rank seen across trials
    pub s_m: usize,
    pub trials: usize,
    pub per_trial: Vec<usize>,
}

/// Evaluates the N x T controllability matrix of one controlled node.
///
/// Columns accumulate forward: the column injected at time k starts as the
/// scaled controlled-node indicator and every later snapshot couples its
/// entries, so the whole matrix costs one pass over the horizon.
pub fn assemble_wc(
    net: &TemporalNetwork,
    controlled: NodeId,
    assignment: &FieldAssignment,
) -> Result<Matrix> {
    let n = net.node_count();
    if controlled as usize >= n {
        return Err(Error::NodeOutOfRange(controlled));
    }
    if assignment.param_count() != net.symbols().len()
        || assignment.intervals.len() != net.horizon()
    {
        return Err(Error::InvalidConfig(
            "assignment was sampled for a different network".into(),
        ));
    }
    let p = assignment.prime();
    let mut columns: Vec<Vec<u64>> = Vec::with_capacity(net.horizon());
    let mut deltas: Vec<(usize, u64)> = Vec::new();
    for k in 1..=net.horizon() {
        let contacts = net.snapshot(k);
        if !contacts.is_empty() {
            let weight = assignment.interval(k);
            for column in &mut columns {
                // gather all reads before any write: a snapshot acts on the
                // state it found, even when contacts share a node
                deltas.clear();
                for &(u, v, param) in contacts {
                    let coupling = mul_mod(weight, assignment.value(param), p);
                    deltas.push((v as usize, mul_mod(column[u as usize], coupling, p)));
                    deltas.push((u as usize, mul_mod(column[v as usize], coupling, p)));
                }
                for &(index, delta) in &deltas {
                    column[index] = add_mod(column[index], delta, p);
                }
            }
        }
        let mut fresh = vec![0u64; n];
        fresh[controlled as usize] = assignment.interval(k);
        columns.push(fresh);
    }
    Ok(Matrix::from_columns(&columns))
}

/// rank of an evaluated matrix over GF(prime)
pub fn generic_rank(matrix: &Matrix, prime: u64) -> usize {
    matrix.rank(prime)
}

/// runs the trials for one node and keeps the largest rank
pub fn controlling_centrality(
    net: &TemporalNetwork,
    controlled: NodeId,
    config: &CentralityConfig,
) -> Result<CentralityReport> {
    if config.trials == 0 {
        return Err(Error::InvalidConfig("at least one trial is required".into()));
    }
    let mut per_trial = Vec::with_capacity(config.trials);
    for trial in 0..config.trials {
        let seed = seeding::derive(config.seed, &[u64::from(controlled), trial as u64]);
        let assignment =
            FieldAssignment::sample(net.symbols(), net.horizon(), config.prime, seed)?;
        let wc = assemble_wc(net, controlled, &assignment)?;
        per_trial.push(generic_rank(&wc, config.prime));
    }
    Ok(CentralityReport {
        node: controlled,
        s_m: per_trial.iter().copied().max().unwrap_or(0),
        trials: config.trials,
        per_trial,
    })
}

/// centralities of every node, sequentially
pub fn centrality_all_seq(
    net: &TemporalNetwork,
    config: &CentralityConfig,
) -> Result<Vec<CentralityReport>> {
    (0..net.node_count() as NodeId)
        .map(|node| controlling_centrality(net, node, config))
        .collect()
}

/// centralities of every node, fanned out across the rayon pool
#[cfg(feature = "parallel")]
pub fn centrality_all(
    net: &TemporalNetwork,
    config: &CentralityConfig,
) -> Result<Vec<CentralityReport>> {
    (0..net.node_count() as NodeId)
        .into_par_iter()
        .map(|node| controlling_centrality(net, node, config))
        .collect()
}

#[cfg(not(feature = "parallel"))]
pub fn centrality_all(
    net: &TemporalNetwork,
    config: &CentralityConfig,
) -> Result<Vec<CentralityReport>> {
    centrality_all_seq(net, config)
}

/// Solves W_c u = target for an input schedule, one entry per time step.
///
/// None means the target lies outside the controllable subspace under this
/// assignment. Free inputs are set to zero, so the schedule is one of many
/// when the matrix has a kernel.
pub fn synthesize_input(
    net: &TemporalNetwork,
    controlled: NodeId,
    assignment: &FieldAssignment,
    target: &[u64],
) -> Result<Option<Vec<u64>>> {
    if target.len() != net.node_count() {
        return Err(Error::InvalidConfig(
            "the target state needs one entry per node".into(),
        ));
    }
    let wc = assemble_wc(net, controlled, assignment)?;
    Ok(wc.solve(target, assignment.prime()))
}

/// Runs the dynamics forward from the zero state under an input schedule
/// and returns the final state. The input of step j lands on the
/// controlled node after that step's contacts have acted, so it first
/// propagates at step j + 1, matching the column convention of W_c.
pub fn simulate_forward(
    net: &TemporalNetwork,
    controlled: NodeId,
    assignment: &FieldAssignment,
    inputs: &[u64],
) -> Result<Vec<u64>> {
    let n = net.node_count();
    if controlled as usize >= n {
        return Err(Error::NodeOutOfRange(controlled));
    }
    if inputs.len() != net.horizon() {
        return Err(Error::InvalidConfig(
            "the input schedule needs one entry per time step".into(),
        ));
    }
    let p = assignment.prime();
    let mut state = vec![0u64; n];
    let mut deltas: Vec<(usize, u64)> = Vec::new();
    for j in 1..=net.horizon() {
        let weight = assignment.interval(j);
        deltas.clear();
        for &(u, v, param) in net.snapshot(j) {
            let coupling = mul_mod(weight, assignment.value(param), p);
            deltas.push((v as usize, mul_mod(state[u as usize], coupling, p)));
            deltas.push((u as usize, mul_mod(state[v as usize], coupling, p)));
        }
        for &(index, delta) in &deltas {
            state[index] = add_mod(state[index], delta, p);
        }
        state[controlled as usize] = add_mod(
            state[controlled as usize],
            mul_mod(weight, inputs[j - 1], p),
            p,
        );
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{six_node_fixture, worked_example};
    use crate::reachability::assemble_w_star;

    fn fixed(net: &TemporalNetwork, values: Vec<u64>) -> FieldAssignment {
        FieldAssignment::from_values(DEFAULT_PRIME, values, net.horizon()).unwrap()
    }

    #[test]
    fn worked_example_centralities() {
        let net = worked_example();
        let config = CentralityConfig::default();
        let report = controlling_centrality(&net, 0, &config).unwrap();
        assert_eq!(report.s_m, 3);
        assert_eq!(report.per_trial, [3, 3, 3]);
        // the hub controls everything
        assert_eq!(controlling_centrality(&net, 1, &config).unwrap().s_m, 4);
    }

    #[test]
    fn wc_columns_by_hand() {
        let net = worked_example();
        let wc = assemble_wc(&net, 0, &fixed(&net, vec![5, 7, 11, 13])).unwrap();
        assert_eq!((wc.rows(), wc.cols()), (4, 4));
        // the first column carries the bounce walk A -> B -> C -> A in its
        // A entry and both A-to-C walks in its C entry
        assert_eq!(wc.column(0), [1 + 5 * 7 * 11, 5, 5 * 7 + 11, 5 * 13]);
        assert_eq!(wc.column(1), [1, 0, 11, 0]);
        assert_eq!(wc.column(2), [1, 0, 11, 0]);
        assert_eq!(wc.column(3), [1, 0, 0, 0]);
        assert_eq!(generic_rank(&wc, DEFAULT_PRIME), 3);
    }

    #[test]
    fn w_star_is_wc_with_a_zero_row_on_top() {
        for (net, node) in [(worked_example(), 0), (six_node_fixture(), 3)] {
            let assignment =
                FieldAssignment::sample(net.symbols(), net.horizon(), DEFAULT_PRIME, 99).unwrap();
            let wc = assemble_wc(&net, node, &assignment).unwrap();
            let w_star = assemble_w_star(&net, node, &assignment).unwrap();
            assert_eq!(w_star.values.rows(), wc.rows() + 1);
            for c in 0..wc.cols() {
                assert_eq!(w_star.values.at(0, c), 0);
                for r in 0..wc.rows() {
                    assert_eq!(w_star.values.at(r + 1, c), wc.at(r, c));
                }
            }
        }
    }

    #[test]
    fn idle_node_keeps_rank_one() {
        let labels = (0..3).map(|i| i.to_string()).collect();
        let net = TemporalNetwork::from_events(labels, 4, std::iter::empty()).unwrap();
        let report = controlling_centrality(&net, 2, &CentralityConfig::default()).unwrap();
        assert_eq!(report.s_m, 1);
    }

    #[test]
    fn single_usable_contact_gives_rank_two() {
        let net = TemporalNetwork::from_events(
            vec!["a".into(), "b".into()],
            2,
            std::iter::once((2, 0, 1)),
        )
        .unwrap();
        let report = controlling_centrality(&net, 0, &CentralityConfig::default()).unwrap();
        assert_eq!(report.s_m, 2);
    }

    #[test]
    fn intervals_do_not_move_the_rank() {
        let net = worked_example();
        let stretched = fixed(&net, vec![5, 7, 11, 13])
            .with_intervals(vec![2, 3, 5, 7])
            .unwrap();
        let wc = assemble_wc(&net, 0, &stretched).unwrap();
        assert_eq!(generic_rank(&wc, DEFAULT_PRIME), 3);
        // the injection columns pick up their interval scaling
        assert_eq!(wc.column(3), [7, 0, 0, 0]);
    }

    #[test]
    fn synthesized_inputs_reach_their_target() {
        let net = six_node_fixture();
        let assignment =
            FieldAssignment::sample(net.symbols(), net.horizon(), DEFAULT_PRIME, 7).unwrap();
        // drive along a known schedule to get a certainly reachable target
        let schedule: Vec<u64> = (1..=net.horizon() as u64).map(|x| 100 + x).collect();
        let target = simulate_forward(&net, 0, &assignment, &schedule).unwrap();
        let recovered = synthesize_input(&net, 0, &assignment, &target)
            .unwrap()
            .expect("target was produced by a schedule, so it is reachable");
        let replay = simulate_forward(&net, 0, &assignment, &recovered).unwrap();
        assert_eq!(replay, target);
    }

    #[test]
    fn unreachable_targets_are_reported() {
        let net = six_node_fixture();
        let assignment =
            FieldAssignment::sample(net.symbols(), net.horizon(), DEFAULT_PRIME, 7).unwrap();
        // E is outside A's reach, so no schedule from A can excite it
        let mut target = vec![0u64; net.node_count()];
        target[4] = 1;
        assert!(synthesize_input(&net, 0, &assignment, &target).unwrap().is_none());
    }

    #[test]
    fn parallel_and_sequential_centralities_agree() {
        let net = six_node_fixture();
        let config = CentralityConfig::default();
        let seq = centrality_all_seq(&net, &config).unwrap();
        let par = centrality_all(&net, &config).unwrap();
        assert_eq!(seq.len(), 6);
        for (a, b) in seq.iter().zip(&par) {
            assert_eq!((a.node, a.s_m, &a.per_trial), (b.node, b.s_m, &b.per_trial));
        }
    }

    #[test]
    fn bad_configurations_are_rejected() {
        let net = worked_example();
        let tiny = CentralityConfig {
            prime: 97,
            ..CentralityConfig::default()
        };
        assert!(controlling_centrality(&net, 0, &tiny).is_err());
        let none = CentralityConfig {
            trials: 0,
            ..CentralityConfig::default()
        };
        assert!(controlling_centrality(&net, 0, &none).is_err());
        assert!(FieldAssignment::from_values(DEFAULT_PRIME, vec![0], 4).is_err());
        let assignment = fixed(&net, vec![5, 7, 11, 13]);
        assert!(assignment.clone().with_intervals(vec![1, 2]).is_err());
        assert!(assemble_wc(&net, 7, &assignment).is_err());
        assert!(synthesize_input(&net, 0, &assignment, &[1, 2]).is_err());
    }
}
