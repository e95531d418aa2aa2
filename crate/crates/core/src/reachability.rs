//! Reachability rows and the augmented matrix W*.
//!
//! Working over states indexed 0..=N, with 0 the controller coordinate and
//! `1 + j` node `j`, each time step acts on a row vector by an augmented
//! snapshot: nodes persist, the controller coordinate fires its injection
//! and dies, and every contact of that step couples its endpoints. A row
//! started as the controller indicator at time t therefore lights up
//! exactly the nodes an injection at t can influence, and stacking the rows
//! for t = 1..=T as columns gives W*, the controllability matrix wearing an
//! extra all-zero controller row.

use std::collections::BTreeSet;

use crate::controllability::FieldAssignment;
use crate::field::{add_mod, mul_mod, Matrix};
use crate::temporal_graph::{NodeId, TemporalNetwork, TimeStep};
use crate::{Error, Result};

/// one time step of the augmented dynamics, as a row-vector action
pub struct AugmentedSnapshot<'a> {
    net: &'a TemporalNetwork,
    assignment: &'a FieldAssignment,
    controlled: NodeId,
    t: TimeStep,
}

impl<'a> AugmentedSnapshot<'a> {
    pub fn new(
        net: &'a TemporalNetwork,
        assignment: &'a FieldAssignment,
        controlled: NodeId,
        t: TimeStep,
    ) -> Self {
        AugmentedSnapshot {
            net,
            assignment,
            controlled,
            t,
        }
    }

    /// applies the step to a length N+1 state row, in place
    pub fn apply(&self, state: &mut [u64]) {
        let p = self.assignment.prime();
        let weight = self.assignment.interval(self.t);
        let previous = state.to_vec();
        // the controller coordinate does not persist; its mass moves onto
        // the controlled node
        state[0] = 0;
        state[self.controlled as usize + 1] = add_mod(
            state[self.controlled as usize + 1],
            mul_mod(previous[0], weight, p),
            p,
        );
        for &(u, v, param) in self.net.snapshot(self.t) {
            let coupling = mul_mod(weight, self.assignment.value(param), p);
            let (u, v) = (u as usize + 1, v as usize + 1);
            state[v] = add_mod(state[v], mul_mod(previous[u], coupling, p), p);
            state[u] = add_mod(state[u], mul_mod(previous[v], coupling, p), p);
        }
    }
}

/// State row of an injection at time `start`, after the remaining steps
/// have run out: the controller indicator pushed through the augmented
/// snapshots `start..=T`.
///
/// The first step consumes the injection, so the entries describe what an
/// input applied at `start` reaches through snapshots `start + 1..=T`;
/// `start = 0` is allowed and gives the full-horizon reach of the node.
pub fn communicability_row(
    net: &TemporalNetwork,
    controlled: NodeId,
    start: TimeStep,
    assignment: &FieldAssignment,
) -> Result<Vec<u64>> {
    if controlled as usize >= net.node_count() {
        return Err(Error::NodeOutOfRange(controlled));
    }
    if start > net.horizon() {
        return Err(Error::StartTimeOutOfRange {
            t0: start,
            horizon: net.horizon(),
        });
    }
    let mut state = vec![0u64; net.node_count() + 1];
    state[0] = 1;
    if start == 0 {
        // the zeroth step has no contacts, it only consumes the injection,
        // putting the mass on the node before snapshot 1 runs
        state[0] = 0;
        state[controlled as usize + 1] = 1;
    }
    for t in start.max(1)..=net.horizon() {
        AugmentedSnapshot::new(net, assignment, controlled, t).apply(&mut state);
    }
    Ok(state)
}

/// numeric W* plus the structural support of each column
#[derive(Debug, Clone)]
pub struct ReachabilityMatrix {
    /// (N+1) x T values, controller row first
    pub values: Matrix,
    /// `pattern[t - 1][r]` says whether entry (r, t - 1) can ever be
    /// nonzero, straight from the reachable sets
    pub pattern: Vec<Vec<bool>>,
}

impl ReachabilityMatrix {
    pub fn is_structural_zero(&self, row: usize, col: usize) -> bool {
        !self.pattern[col][row]
    }
}

/// assembles W* column by column in one forward sweep: the column of
/// injection time t enters as the controller indicator right before step t
/// runs, so step t consumes its injection and later steps spread it
pub fn assemble_w_star(
    net: &TemporalNetwork,
    controlled: NodeId,
    assignment: &FieldAssignment,
) -> Result<ReachabilityMatrix> {
    if controlled as usize >= net.node_count() {
        return Err(Error::NodeOutOfRange(controlled));
    }
    let n = net.node_count();
    let mut columns: Vec<Vec<u64>> = Vec::with_capacity(net.horizon());
    for t in 1..=net.horizon() {
        let mut fresh = vec![0u64; n + 1];
        fresh[0] = 1;
        columns.push(fresh);
        let step = AugmentedSnapshot::new(net, assignment, controlled, t);
        for column in &mut columns {
            step.apply(column);
        }
    }

    let mut pattern = Vec::with_capacity(net.horizon());
    for t in 1..=net.horizon() {
        let support = reachable_set(net, controlled, t)?;
        let mut flags = vec![false; n + 1];
        for node in support {
            flags[node as usize + 1] = true;
        }
        pattern.push(flags);
    }

    Ok(ReachabilityMatrix {
        values: Matrix::from_columns(&columns),
        pattern,
    })
}

/// Nodes an injection on `source` at time `start` can influence by the end
/// of the horizon, the source included.
///
/// Arrival-layer search: the source holds its first copy at layer
/// `start + 1`, and a contact (u, v) of snapshot s forwards a copy held at
/// layer s or earlier to layer s + 1. One pass over the snapshots in time
/// order settles every arrival because updates never unlock contacts of
/// the snapshot that produced them.
pub fn reachable_set(
    net: &TemporalNetwork,
    source: NodeId,
    start: TimeStep,
) -> Result<BTreeSet<NodeId>> {
    if source as usize >= net.node_count() {
        return Err(Error::NodeOutOfRange(source));
    }
    if start > net.horizon() {
        return Err(Error::StartTimeOutOfRange {
            t0: start,
            horizon: net.horizon(),
        });
    }
    const UNSEEN: usize = usize::MAX;
    let mut arrival = vec![UNSEEN; net.node_count()];
    arrival[source as usize] = start + 1;
    for s in start + 1..=net.horizon() {
        for &(u, v, _) in net.snapshot(s) {
            let (u, v) = (u as usize, v as usize);
            if arrival[u] <= s {
                arrival[v] = arrival[v].min(s + 1);
            }
            if arrival[v] <= s {
                arrival[u] = arrival[u].min(s + 1);
            }
        }
    }
    Ok(arrival
        .iter()
        .enumerate()
        .filter(|&(_, &layer)| layer != UNSEEN)
        .map(|(node, _)| node as NodeId)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DEFAULT_PRIME;
    use crate::fixtures::{six_node_fixture, worked_example};
    use crate::trees::extract_trees;

    fn fixed_assignment(net: &TemporalNetwork, values: Vec<u64>) -> FieldAssignment {
        FieldAssignment::from_values(DEFAULT_PRIME, values, net.horizon()).unwrap()
    }

    #[test]
    fn worked_example_rows() {
        let net = worked_example();
        let assignment = fixed_assignment(&net, vec![5, 7, 11, 13]);
        // injection at 2 only reaches C, through the one later A-C contact
        let row = communicability_row(&net, 0, 2, &assignment).unwrap();
        assert_eq!(row, [0, 1, 0, 11, 0]);
        // injection at 1 reaches everything; C collects its two walks and
        // A picks up the bounce A -> B -> C -> A on top of persisting
        let row = communicability_row(&net, 0, 1, &assignment).unwrap();
        assert_eq!(row, [0, 1 + 5 * 7 * 11, 5, 5 * 7 + 11, 5 * 13]);
        // the last injection has no snapshots left to ride
        let row = communicability_row(&net, 0, net.horizon(), &assignment).unwrap();
        assert_eq!(row, [0, 1, 0, 0, 0]);
    }

    #[test]
    fn w_star_wears_a_zero_controller_row() {
        let net = worked_example();
        let assignment = fixed_assignment(&net, vec![5, 7, 11, 13]);
        let w_star = assemble_w_star(&net, 0, &assignment).unwrap();
        assert_eq!((w_star.values.rows(), w_star.values.cols()), (5, 4));
        for t in 0..4 {
            assert_eq!(w_star.values.at(0, t), 0);
            assert!(w_star.is_structural_zero(0, t));
        }
        assert_eq!(w_star.values.column(1), [0, 1, 0, 11, 0]);
        assert_eq!(w_star.values.rank(DEFAULT_PRIME), 3);
    }

    #[test]
    fn structural_support_shrinks_with_time() {
        let net = six_node_fixture();
        for node in 0..net.node_count() as NodeId {
            let assignment = fixed_assignment(&net, (1..=19).collect());
            let w_star = assemble_w_star(&net, node, &assignment).unwrap();
            for t in 1..net.horizon() {
                for row in 0..=net.node_count() {
                    if w_star.pattern[t][row] {
                        assert!(w_star.pattern[t - 1][row], "support grew at column {t}");
                    }
                }
            }
            // values respect the declared zero pattern
            for t in 0..net.horizon() {
                for row in 0..=net.node_count() {
                    if w_star.is_structural_zero(row, t) {
                        assert_eq!(w_star.values.at(row, t), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn column_support_matches_the_trees() {
        let net = six_node_fixture();
        for node in 0..net.node_count() as NodeId {
            let trees = extract_trees(&net, node).unwrap();
            for (index, tree) in trees.iter().enumerate() {
                let reach = reachable_set(&net, node, index + 1).unwrap();
                assert_eq!(&reach, tree.nodes());
            }
        }
    }

    #[test]
    fn six_node_reachable_sets() {
        let net = six_node_fixture();
        let labels = |set: BTreeSet<NodeId>| -> String {
            set.iter().map(|&i| net.label(i)).collect()
        };
        assert_eq!(labels(reachable_set(&net, 0, 0).unwrap()), "ABCF");
        assert_eq!(labels(reachable_set(&net, 3, 0).unwrap()), "BCDEF");
        for node in 0..net.node_count() as NodeId {
            let last = reachable_set(&net, node, net.horizon()).unwrap();
            assert_eq!(last.iter().copied().collect::<Vec<_>>(), [node]);
        }
    }

    #[test]
    fn lone_node_matrix_has_rank_one() {
        let net = TemporalNetwork::from_events(vec!["n".into()], 3, std::iter::empty()).unwrap();
        let assignment = fixed_assignment(&net, vec![]);
        let w_star = assemble_w_star(&net, 0, &assignment).unwrap();
        assert_eq!(w_star.values.rank(DEFAULT_PRIME), 1);
        for t in 0..3 {
            assert_eq!(w_star.values.column(t), [0, 1]);
        }
    }

    #[test]
    fn zeroth_row_rides_the_first_snapshot() {
        // a single contact at time 1 is visible only to the time-0 injection
        let net = TemporalNetwork::from_events(
            vec!["a".into(), "b".into()],
            1,
            std::iter::once((1, 0, 1)),
        )
        .unwrap();
        let assignment = fixed_assignment(&net, vec![17]);
        assert_eq!(communicability_row(&net, 0, 0, &assignment).unwrap(), [0, 1, 17]);
        assert_eq!(communicability_row(&net, 0, 1, &assignment).unwrap(), [0, 1, 0]);
        assert_eq!(
            reachable_set(&net, 0, 0).unwrap().into_iter().collect::<Vec<_>>(),
            [0, 1]
        );
    }

    #[test]
    fn bad_arguments_are_rejected() {
        let net = worked_example();
        let assignment = fixed_assignment(&net, vec![5, 7, 11, 13]);
        assert!(communicability_row(&net, 9, 1, &assignment).is_err());
        assert!(communicability_row(&net, 0, 5, &assignment).is_err());
        assert!(reachable_set(&net, 0, 5).is_err());
        assert!(reachable_set(&net, 4, 0).is_err());
    }
}
