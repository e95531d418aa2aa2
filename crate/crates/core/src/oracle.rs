//! Brute-force reference implementations for cross-checking the engine.
//!
//! Everything here trades speed for directness: ranks come from dense
//! per-definition matrix products over exact big integers (no modular
//! shortcut unless asked), reachability from the literal layered graph.
//! Hard size caps keep the costs honest; callers outside the caps get an
//! error instead of a stalled process.

use std::collections::BTreeSet;

use num_bigint::BigInt;

use crate::field::{self, Matrix};
use crate::seeding;
use crate::temporal_graph::{NodeId, TemporalNetwork, TimeStep};
use crate::{Error, Result};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    pub max_n: usize,
    pub max_t: usize,
    pub trials: usize,
    pub seed: u64,
    /// true for exact integer arithmetic, false to work over the default
    /// prime field instead
    pub exact: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_n: 10,
            max_t: 8,
            trials: 3,
            seed: 1,
            exact: true,
        }
    }
}

fn check_caps(net: &TemporalNetwork, config: &OracleConfig) -> Result<()> {
    if net.node_count() > config.max_n || net.horizon() > config.max_t {
        return Err(Error::InstanceTooLarge {
            n: net.node_count(),
            max_n: config.max_n,
            t: net.horizon(),
            max_t: config.max_t,
        });
    }
    Ok(())
}

/// dense step matrix I + A_t with the given parameter values
fn dense_step(net: &TemporalNetwork, t: TimeStep, values: &[i64]) -> Vec<Vec<BigInt>> {
    let n = net.node_count();
    let mut g = vec![vec![BigInt::ZERO; n]; n];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = BigInt::from(1);
    }
    for &(u, v, param) in net.snapshot(t) {
        let w = BigInt::from(values[param as usize]);
        g[u as usize][v as usize] += &w;
        g[v as usize][u as usize] += &w;
    }
    g
}

fn matvec(m: &[Vec<BigInt>], x: &[BigInt]) -> Vec<BigInt> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

/// rank of an integer matrix by fraction-free elimination
fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut previous = BigInt::from(1);
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot_row) = (rank..rows).find(|&r| m[r][col] != BigInt::ZERO) else {
            continue;
        };
        m.swap(rank, pivot_row);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let numerator = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                m[r][c] = numerator / &previous;
            }
            m[r][col] = BigInt::ZERO;
        }
        previous = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Controllability rank of one node, straight from the definition: every
/// column is the injection vector pushed through explicit dense step
/// matrices, and the rank is taken exactly (or over the prime field in
/// field mode). The best of `trials` random parameter draws is returned.
pub fn brute_rank_wc(
    net: &TemporalNetwork,
    controlled: NodeId,
    config: &OracleConfig,
) -> Result<usize> {
    check_caps(net, config)?;
    let n = net.node_count();
    if controlled as usize >= n {
        return Err(Error::NodeOutOfRange(controlled));
    }
    if config.trials == 0 {
        return Err(Error::InvalidConfig("at least one trial is required".into()));
    }
    let mut best = 0;
    for trial in 0..config.trials {
        let seed = seeding::derive(config.seed, &[u64::from(controlled), trial as u64]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<i64> = (0..net.symbols().len())
            .map(|_| rng.random_range(1..=0xffff))
            .collect();

        let mut columns: Vec<Vec<BigInt>> = Vec::with_capacity(net.horizon());
        for k in 1..=net.horizon() {
            let mut column = vec![BigInt::ZERO; n];
            column[controlled as usize] = BigInt::from(1);
            for t in k + 1..=net.horizon() {
                column = matvec(&dense_step(net, t, &values), &column);
            }
            columns.push(column);
        }

        let rank = if config.exact {
            let rows: Vec<Vec<BigInt>> = (0..n)
                .map(|r| columns.iter().map(|c| c[r].clone()).collect())
                .collect();
            bareiss_rank(rows)
        } else {
            let p = field::DEFAULT_PRIME;
            let reduced: Vec<Vec<u64>> = columns
                .iter()
                .map(|col| {
                    col.iter()
                        .map(|x| {
                            let (_, digits) = (x % p).to_u64_digits();
                            digits.first().copied().unwrap_or(0)
                        })
                        .collect()
                })
                .collect();
            Matrix::from_columns(&reduced).rank(p)
        };
        best = best.max(rank);
    }
    Ok(best)
}

/// Reach of an injection, straight from the layered-graph definition: the
/// full dense copy-by-copy adjacency is materialized and searched, and a
/// node counts as reached when any of its copies is.
pub fn brute_reachability(
    net: &TemporalNetwork,
    source: NodeId,
    start: TimeStep,
    config: &OracleConfig,
) -> Result<BTreeSet<NodeId>> {
    check_caps(net, config)?;
    let n = net.node_count();
    if source as usize >= n {
        return Err(Error::NodeOutOfRange(source));
    }
    if start > net.horizon() {
        return Err(Error::StartTimeOutOfRange {
            t0: start,
            horizon: net.horizon(),
        });
    }

    // vertices: node copies per layer 1..=T+1, then controller copies 0..=T
    let layers = net.horizon() + 1;
    let size = n * layers + layers;
    let copy = |node: usize, layer: usize| (layer - 1) * n + node;
    let controller = |time: usize| n * layers + time;

    let mut adjacency = vec![vec![false; size]; size];
    for layer in 1..net.horizon() + 1 {
        for node in 0..n {
            adjacency[copy(node, layer)][copy(node, layer + 1)] = true;
        }
        for &(u, v, _) in net.snapshot(layer) {
            adjacency[copy(u as usize, layer)][copy(v as usize, layer + 1)] = true;
            adjacency[copy(v as usize, layer)][copy(u as usize, layer + 1)] = true;
        }
    }
    for time in 0..=net.horizon() {
        adjacency[controller(time)][copy(source as usize, time + 1)] = true;
    }

    let mut visited = vec![false; size];
    visited[controller(start)] = true;
    let mut frontier = vec![controller(start)];
    while let Some(from) = frontier.pop() {
        for (to, &edge) in adjacency[from].iter().enumerate() {
            if edge && !visited[to] {
                visited[to] = true;
                frontier.push(to);
            }
        }
    }

    Ok((0..n)
        .filter(|&node| (1..=layers).any(|layer| visited[copy(node, layer)]))
        .map(|node| node as NodeId)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::controllability::{controlling_centrality, CentralityConfig};
    use crate::fixtures::{six_node_fixture, worked_example};
    use crate::reachability::reachable_set;
    use crate::synth::{generate, SynthConfig};

    #[test]
    fn worked_example_rank_is_three() {
        let net = worked_example();
        let config = OracleConfig::default();
        assert_eq!(brute_rank_wc(&net, 0, &config).unwrap(), 3);
        let field_mode = OracleConfig {
            exact: false,
            ..config
        };
        assert_eq!(brute_rank_wc(&net, 0, &field_mode).unwrap(), 3);
    }

    #[test]
    fn oracle_and_engine_agree_on_small_random_networks() {
        let oracle_config = OracleConfig::default();
        let engine_config = CentralityConfig::default();
        for seed in 0..12 {
            let net = generate(&SynthConfig {
                n: 6,
                p: 0.15,
                horizon: 6,
                seed,
            })
            .unwrap();
            for node in 0..net.node_count() as NodeId {
                let brute = brute_rank_wc(&net, node, &oracle_config).unwrap();
                let fast = controlling_centrality(&net, node, &engine_config).unwrap().s_m;
                assert_eq!(brute, fast, "seed {seed} node {node}");
                let slow_reach = brute_reachability(&net, node, 0, &oracle_config).unwrap();
                let fast_reach = reachable_set(&net, node, 0).unwrap();
                assert_eq!(slow_reach, fast_reach, "seed {seed} node {node}");
            }
        }
    }

    #[test]
    fn six_node_reach_from_the_layered_graph() {
        let net = six_node_fixture();
        let config = OracleConfig::default();
        let reach = brute_reachability(&net, 0, 0, &config).unwrap();
        let labels: String = reach.iter().map(|&i| net.label(i)).collect();
        assert_eq!(labels, "ABCF");
        for node in 0..net.node_count() as NodeId {
            let last = brute_reachability(&net, node, net.horizon(), &config).unwrap();
            assert_eq!(last.into_iter().collect::<Vec<_>>(), [node]);
        }
    }

    #[test]
    fn lone_node_has_rank_one() {
        let net = TemporalNetwork::from_events(
            vec!["a".into(), "b".into()],
            3,
            std::iter::empty(),
        )
        .unwrap();
        assert_eq!(brute_rank_wc(&net, 0, &OracleConfig::default()).unwrap(), 1);
    }

    #[test]
    fn caps_are_enforced() {
        let wide = generate(&SynthConfig {
            n: 11,
            p: 0.1,
            horizon: 5,
            seed: 3,
        })
        .unwrap();
        let config = OracleConfig::default();
        assert!(matches!(
            brute_rank_wc(&wide, 0, &config),
            Err(Error::InstanceTooLarge { .. })
        ));
        let long = generate(&SynthConfig {
            n: 5,
            p: 0.1,
            horizon: 9,
            seed: 3,
        })
        .unwrap();
        assert!(matches!(
            brute_reachability(&long, 0, 0, &config),
            Err(Error::InstanceTooLarge { .. })
        ));
    }
}
