//! Temporal trees and the classification that turns them into rank bounds.
//!
//! Column `t` of the controllability matrix reaches exactly the nodes a
//! signal injected at time `t` can touch, and the first-arrival forest of
//! that injection captures the column's leading structure. Columns whose
//! trees look alike cannot all contribute new directions, which is what
//! the bounds exploit: the tree columns split into two families, each
//! family's groups get a rank value from counting rules alone, and the
//! centrality is bracketed between the largest single group value and the
//! groups' sum, with no field arithmetic anywhere.
//!
//! Terminology used throughout:
//!
//! * a tree's *pattern* is its set of directed (parent, child) node pairs,
//! * its *interactions* are the contact parameters appearing on its paths,
//! * trees with identical patterns are *homogeneous*, the rest form the
//!   *heterogeneous* family.

use std::collections::{BTreeMap, BTreeSet};

use crate::controllability::FieldAssignment;
use crate::field::{mul_mod, Matrix};
use crate::temporal_graph::{NodeId, ParamId, TemporalNetwork};
use crate::tog::{bfs_spanning_tree, build_tog};
use crate::{Error, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// First-arrival tree of one controller injection.
///
/// `paths[j]` lists the contact parameters on the unique tree path from the
/// controlled node to `j`, in firing order; the controlled node itself has
/// the empty path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalTree {
    controlled: NodeId,
    root_time: usize,
    nodes: BTreeSet<NodeId>,
    paths: BTreeMap<NodeId, Vec<ParamId>>,
    pattern: BTreeSet<(NodeId, NodeId)>,
    interactions: BTreeSet<ParamId>,
}

impl TemporalTree {
    /// assembles a tree from a BFS pass: `order` is node discovery order
    /// (controlled node first), `parent[j]` the interaction that first
    /// reached node `j`
    pub(crate) fn from_discovery(
        controlled: NodeId,
        root_time: usize,
        order: &[NodeId],
        parent: &[Option<(NodeId, ParamId)>],
    ) -> Self {
        let mut paths = BTreeMap::from([(controlled, Vec::new())]);
        let mut pattern = BTreeSet::new();
        let mut interactions = BTreeSet::new();
        for &node in order {
            if node == controlled {
                continue;
            }
            let (from, param) =
                parent[node as usize].expect("non-root nodes are discovered via interactions");
            let mut path = paths[&from].clone();
            path.push(param);
            paths.insert(node, path);
            pattern.insert((from, node));
            interactions.insert(param);
        }
        TemporalTree {
            controlled,
            root_time,
            nodes: paths.keys().copied().collect(),
            paths,
            pattern,
            interactions,
        }
    }

    /// Builds a tree from explicit `(parent, child, parameter)` links.
    ///
    /// The links must form an arborescence hanging off the controlled node,
    /// with one link and one fresh parameter per child. Mostly useful for
    /// assembling hand-made families when exercising the counting rules.
    pub fn from_parents(
        controlled: NodeId,
        root_time: usize,
        links: &[(NodeId, NodeId, ParamId)],
    ) -> Result<Self> {
        let mut pending: Vec<(NodeId, NodeId, ParamId)> = links.to_vec();
        let mut params = BTreeSet::new();
        for &(_, child, param) in &pending {
            if child == controlled {
                return Err(Error::ContractViolation(
                    "the controlled node cannot be a child".into(),
                ));
            }
            if !params.insert(param) {
                return Err(Error::ContractViolation(
                    "tree links must carry distinct parameters".into(),
                ));
            }
        }
        let mut order = vec![controlled];
        let mut parent: Vec<Option<(NodeId, ParamId)>> = Vec::new();
        let mut attached = BTreeSet::from([controlled]);
        while !pending.is_empty() {
            let before = pending.len();
            pending.retain(|&(from, child, param)| {
                if !attached.contains(&from) {
                    return true;
                }
                if !attached.insert(child) {
                    return true; // duplicate child, caught below
                }
                order.push(child);
                let slot = child as usize;
                if parent.len() <= slot {
                    parent.resize(slot + 1, None);
                }
                parent[slot] = Some((from, param));
                false
            });
            if pending.len() == before {
                return Err(Error::ContractViolation(
                    "tree links do not form an arborescence on the controlled node".into(),
                ));
            }
        }
        if order.len() != links.len() + 1 {
            return Err(Error::ContractViolation(
                "every child needs exactly one parent link".into(),
            ));
        }
        Ok(TemporalTree::from_discovery(controlled, root_time, &order, &parent))
    }

    pub fn controlled(&self) -> NodeId {
        self.controlled
    }

    /// injection time this tree was grown from
    pub fn root_time(&self) -> usize {
        self.root_time
    }

    pub fn nodes(&self) -> &BTreeSet<NodeId> {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn path(&self, node: NodeId) -> Option<&[ParamId]> {
        self.paths.get(&node).map(Vec::as_slice)
    }

    pub fn pattern(&self) -> &BTreeSet<(NodeId, NodeId)> {
        &self.pattern
    }

    pub fn interactions(&self) -> &BTreeSet<ParamId> {
        &self.interactions
    }

    /// Numeric column of this tree under a parameter assignment: entry
    /// `1 + j` is the product of the parameters on the path to node `j`
    /// (so the controlled node gets 1), unreached nodes and the controller
    /// row 0 get 0. Interval weights are left out; they only rescale
    /// entries by nonzero factors and cannot change any rank this column
    /// takes part in.
    pub fn reachability_vector(&self, n: usize, assignment: &FieldAssignment) -> Vec<u64> {
        let p = assignment.prime();
        let mut column = vec![0u64; n + 1];
        for (&node, path) in &self.paths {
            let mut product = 1u64;
            for &param in path {
                product = mul_mod(product, assignment.value(param), p);
            }
            column[node as usize + 1] = product;
        }
        column
    }
}

/// grows the tree of every injection time `1..=T` for one controlled node;
/// index `t - 1` holds the tree rooted at time `t`
pub fn extract_trees(net: &TemporalNetwork, controlled: NodeId) -> Result<Vec<TemporalTree>> {
    let tog = build_tog(net, controlled)?;
    Ok((1..=net.horizon()).map(|t| bfs_spanning_tree(&tog, t)).collect())
}

/// stacks the trees' numeric columns into an (N+1) x T matrix, mirroring
/// the layout of the augmented reachability matrix
pub fn assemble_w_r(trees: &[TemporalTree], n: usize, assignment: &FieldAssignment) -> Matrix {
    let columns: Vec<Vec<u64>> =
        trees.iter().map(|t| t.reachability_vector(n, assignment)).collect();
    Matrix::from_columns(&columns)
}

/// heterogeneous trees sharing one node set (their patterns still differ)
#[derive(Debug, Clone)]
pub struct SameNodesGroup {
    /// indices into the extraction-order tree list
    pub trees: Vec<usize>,
    pub node_count: usize,
}

/// one maximal run of homogeneous trees (identical patterns)
#[derive(Debug, Clone)]
pub struct HomogeneousGroup {
    pub trees: Vec<usize>,
    pub node_count: usize,
    pub interdependent: Vec<InterdependentSubgroup>,
    /// trees sharing no interaction with anyone else in the group
    pub independent: Vec<usize>,
}

/// homogeneous trees chained together by shared interactions
#[derive(Debug, Clone)]
pub struct InterdependentSubgroup {
    pub trees: Vec<usize>,
    /// interactions common to every member
    pub shared: BTreeSet<ParamId>,
}

/// full classification of one controlled node's trees
#[derive(Debug, Clone)]
pub struct TreeTaxonomy {
    tree_count: usize,
    pub het_same: Vec<SameNodesGroup>,
    /// heterogeneous trees whose node sets are pairwise distinct
    pub het_diff: Vec<usize>,
    pub hom: Vec<HomogeneousGroup>,
}

impl TreeTaxonomy {
    pub fn tree_count(&self) -> usize {
        self.tree_count
    }

    pub fn group_count(&self) -> usize {
        self.het_same.len() + usize::from(!self.het_diff.is_empty()) + self.hom.len()
    }
}

/// Sorts trees into the taxonomy driving the bounds.
///
/// Trees bucket by pattern. Buckets of one are heterogeneous and split by
/// node set (repeated sets form same-nodes groups, the leftovers one
/// different-nodes group). Larger buckets are homogeneous groups, carved
/// into subgroups along the shares-an-interaction relation: connected
/// components of two or more trees are interdependent, loners independent.
pub fn classify(trees: &[TemporalTree]) -> TreeTaxonomy {
    let mut buckets: BTreeMap<&BTreeSet<(NodeId, NodeId)>, Vec<usize>> = BTreeMap::new();
    for (index, tree) in trees.iter().enumerate() {
        buckets.entry(tree.pattern()).or_default().push(index);
    }

    let mut het: Vec<usize> = Vec::new();
    let mut hom_members: Vec<Vec<usize>> = Vec::new();
    for members in buckets.into_values() {
        if members.len() == 1 {
            het.push(members[0]);
        } else {
            hom_members.push(members);
        }
    }
    het.sort_unstable();
    hom_members.sort_unstable_by_key(|m| m[0]);

    let mut by_nodes: BTreeMap<&BTreeSet<NodeId>, Vec<usize>> = BTreeMap::new();
    for &index in &het {
        by_nodes.entry(trees[index].nodes()).or_default().push(index);
    }
    let mut het_same: Vec<SameNodesGroup> = Vec::new();
    let mut het_diff: Vec<usize> = Vec::new();
    for members in by_nodes.into_values() {
        if members.len() == 1 {
            het_diff.push(members[0]);
        } else {
            het_same.push(SameNodesGroup {
                node_count: trees[members[0]].node_count(),
                trees: members,
            });
        }
    }
    het_diff.sort_unstable();
    het_same.sort_unstable_by_key(|g| g.trees[0]);

    let mut hom = Vec::new();
    for members in hom_members {
        hom.push(split_homogeneous(trees, members));
    }

    TreeTaxonomy {
        tree_count: trees.len(),
        het_same,
        het_diff,
        hom,
    }
}

fn split_homogeneous(trees: &[TemporalTree], members: Vec<usize>) -> HomogeneousGroup {
    let size = members.len();
    let shares = |a: usize, b: usize| {
        trees[members[a]]
            .interactions()
            .intersection(trees[members[b]].interactions())
            .next()
            .is_some()
    };

    let mut component = vec![usize::MAX; size];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for start in 0..size {
        if component[start] != usize::MAX {
            continue;
        }
        let id = components.len();
        component[start] = id;
        components.push(Vec::new());
        let mut stack = vec![start];
        while let Some(at) = stack.pop() {
            components[id].push(at);
            for other in 0..size {
                if component[other] == usize::MAX && shares(at, other) {
                    component[other] = id;
                    stack.push(other);
                }
            }
        }
    }

    let mut interdependent = Vec::new();
    let mut independent = Vec::new();
    for mut comp in components {
        comp.sort_unstable();
        let comp: Vec<usize> = comp.into_iter().map(|i| members[i]).collect();
        if comp.len() == 1 {
            independent.push(comp[0]);
        } else {
            let mut shared: BTreeSet<ParamId> = trees[comp[0]].interactions().clone();
            for &index in &comp[1..] {
                shared = shared
                    .intersection(trees[index].interactions())
                    .copied()
                    .collect();
            }
            interdependent.push(InterdependentSubgroup { trees: comp, shared });
        }
    }
    independent.sort_unstable();
    interdependent.sort_unstable_by_key(|s| s.trees[0]);

    HomogeneousGroup {
        node_count: trees[members[0]].node_count(),
        trees: members,
        interdependent,
        independent,
    }
}

/// generic rank of heterogeneous trees on one common node set:
/// min(|V|, n). Distinct patterns over |V| nodes keep contributing new
/// directions until the node set is exhausted.
pub fn rank_het_same_nodes(trees: &[TemporalTree], members: &[usize]) -> Result<usize> {
    let [first, rest @ ..] = members else {
        return Err(Error::EmptyGroup);
    };
    let nodes = trees[*first].nodes();
    if rest.iter().any(|&i| trees[i].nodes() != nodes) {
        return Err(Error::ContractViolation(
            "same-nodes rank needs identical node sets".into(),
        ));
    }
    Ok(nodes.len().min(members.len()))
}

/// generic rank of heterogeneous trees with pairwise distinct node sets: n.
/// Trees of an actual extraction shrink as injections move later, so their
/// node sets nest and each tree owns a node the next one lacks.
pub fn rank_het_diff_nodes(trees: &[TemporalTree], members: &[usize]) -> Result<usize> {
    if members.is_empty() {
        return Err(Error::EmptyGroup);
    }
    let sets: BTreeSet<&BTreeSet<NodeId>> = members.iter().map(|&i| trees[i].nodes()).collect();
    if sets.len() != members.len() {
        return Err(Error::ContractViolation(
            "different-nodes rank needs pairwise distinct node sets".into(),
        ));
    }
    Ok(members.len())
}

/// generic rank of homogeneous trees with pairwise disjoint interaction
/// sets: min(|V|, n), exactly as if their patterns differed
pub fn rank_independent(trees: &[TemporalTree], members: &[usize]) -> Result<usize> {
    let [first, rest @ ..] = members else {
        return Err(Error::EmptyGroup);
    };
    let pattern = trees[*first].pattern();
    if rest.iter().any(|&i| trees[i].pattern() != pattern) {
        return Err(Error::ContractViolation(
            "independent rank is defined within one homogeneous group".into(),
        ));
    }
    let mut seen: BTreeSet<ParamId> = trees[*first].interactions().clone();
    for &index in rest {
        for param in trees[index].interactions() {
            if !seen.insert(*param) {
                return Err(Error::ContractViolation(
                    "independent trees must not share interactions".into(),
                ));
            }
        }
    }
    Ok(trees[*first].node_count().min(members.len()))
}

/// Generic rank of homogeneous trees that all share the interactions `I`:
/// min(|V| - |I|, n). The shared factor pins the trees to a common
/// direction, leaving |V| - |I| degrees of freedom.
pub fn rank_interdependent(trees: &[TemporalTree], members: &[usize]) -> Result<usize> {
    if members.len() < 2 {
        return Err(Error::ContractViolation(
            "an interdependent subgroup has at least two trees".into(),
        ));
    }
    let pattern = trees[members[0]].pattern();
    if members[1..].iter().any(|&i| trees[i].pattern() != pattern) {
        return Err(Error::ContractViolation(
            "interdependent rank is defined within one homogeneous group".into(),
        ));
    }
    let mut shared: BTreeSet<ParamId> = trees[members[0]].interactions().clone();
    for &index in &members[1..] {
        shared = shared.intersection(trees[index].interactions()).copied().collect();
    }
    if shared.is_empty() {
        return Err(Error::ContractViolation(
            "interdependent trees share no common interaction".into(),
        ));
    }
    Ok((trees[members[0]].node_count() - shared.len()).min(members.len()))
}

/// Generic rank of a whole homogeneous group.
///
/// Each interdependent subgroup spans at most min(|V| - |I_w|, n_w)
/// directions, and distinct subgroups are pinned along different contacts,
/// so their contributions add; the independent trees add min(|V|, count);
/// the total is capped by |V|. A subgroup whose members only chain together
/// pairwise can end up with an empty common interaction set; the same count
/// with |I_w| = 0 still upper-bounds its rank, so the formula is applied
/// as-is rather than refused.
pub fn rank_homogeneous_group(group: &HomogeneousGroup) -> usize {
    let v = group.node_count;
    let mut inter = 0usize;
    for sub in &group.interdependent {
        inter += (v - sub.shared.len()).min(sub.trees.len());
    }
    let indep = v.min(group.independent.len());
    v.min(inter + indep)
}

/// (max, sum) of the heterogeneous group ranks; (0, 0) when the family is
/// empty
pub fn bounds_heterogeneous(
    trees: &[TemporalTree],
    taxonomy: &TreeTaxonomy,
) -> Result<(usize, usize)> {
    let mut ranks = Vec::new();
    for group in &taxonomy.het_same {
        ranks.push(rank_het_same_nodes(trees, &group.trees)?);
    }
    if !taxonomy.het_diff.is_empty() {
        ranks.push(rank_het_diff_nodes(trees, &taxonomy.het_diff)?);
    }
    Ok((ranks.iter().copied().max().unwrap_or(0), ranks.iter().sum()))
}

/// (max, sum) of the homogeneous group ranks; (0, 0) when the family is
/// empty
pub fn bounds_homogeneous(taxonomy: &TreeTaxonomy) -> (usize, usize) {
    let ranks: Vec<usize> =
        taxonomy.hom.iter().map(rank_homogeneous_group).collect();
    (ranks.iter().copied().max().unwrap_or(0), ranks.iter().sum())
}

/// sandwich around one node's centrality, with the pieces it was built from
#[derive(Debug, Clone)]
pub struct BoundsReport {
    pub node: NodeId,
    /// the larger of the two families' lower brackets
    pub lower: usize,
    /// the families' upper brackets summed, clipped to the node count
    pub upper: usize,
    /// (max, sum) of the heterogeneous group ranks
    pub heterogeneous: (usize, usize),
    /// (max, sum) of the homogeneous group ranks
    pub homogeneous: (usize, usize),
    pub het_group_ranks: Vec<usize>,
    pub hom_group_ranks: Vec<usize>,
}

/// Combines the group counting rules into one bracket per node.
///
/// Every group's rank value comes from the counting rules alone. Within a
/// family, the largest single group value and the sum over groups bracket
/// the family's span; across families, either one spans controllable
/// directions on its own and together they cannot exceed their sum, so the
/// report takes the larger of the family lower brackets and the clipped
/// sum of the upper ones.
pub fn bounds_total(
    trees: &[TemporalTree],
    taxonomy: &TreeTaxonomy,
    node_count: usize,
) -> Result<BoundsReport> {
    let Some(first) = trees.first() else {
        return Err(Error::EmptyGroup);
    };
    let mut het_group_ranks = Vec::new();
    for group in &taxonomy.het_same {
        het_group_ranks.push(rank_het_same_nodes(trees, &group.trees)?);
    }
    if !taxonomy.het_diff.is_empty() {
        het_group_ranks.push(rank_het_diff_nodes(trees, &taxonomy.het_diff)?);
    }

    let hom_group_ranks: Vec<usize> =
        taxonomy.hom.iter().map(rank_homogeneous_group).collect();

    let heterogeneous: (usize, usize) = (
        het_group_ranks.iter().copied().max().unwrap_or(0),
        het_group_ranks.iter().sum(),
    );
    let homogeneous: (usize, usize) = (
        hom_group_ranks.iter().copied().max().unwrap_or(0),
        hom_group_ranks.iter().sum(),
    );
    Ok(BoundsReport {
        node: first.controlled(),
        lower: heterogeneous.0.max(homogeneous.0),
        upper: (heterogeneous.1 + homogeneous.1).min(node_count),
        heterogeneous,
        homogeneous,
        het_group_ranks,
        hom_group_ranks,
    })
}

/// extraction, classification and bounds for one controlled node
pub fn bounds_for(net: &TemporalNetwork, node: NodeId) -> Result<BoundsReport> {
    let trees = extract_trees(net, node)?;
    let taxonomy = classify(&trees);
    bounds_total(&trees, &taxonomy, net.node_count())
}

/// bounds for every node, sequentially
pub fn bounds_all_seq(net: &TemporalNetwork) -> Result<Vec<BoundsReport>> {
    (0..net.node_count() as NodeId)
        .map(|node| bounds_for(net, node))
        .collect()
}

/// bounds for every node, fanned out across the rayon pool
#[cfg(feature = "parallel")]
pub fn bounds_all(net: &TemporalNetwork) -> Result<Vec<BoundsReport>> {
    (0..net.node_count() as NodeId)
        .into_par_iter()
        .map(|node| bounds_for(net, node))
        .collect()
}

#[cfg(not(feature = "parallel"))]
pub fn bounds_all(net: &TemporalNetwork) -> Result<Vec<BoundsReport>> {
    bounds_all_seq(net)
}

/// One CSV row per tree: `tree_t,family,group_id,subgroup_id,nodes,interactions`.
///
/// Groups are numbered across the whole taxonomy (same-nodes groups, then
/// the different-nodes group, then homogeneous groups). Subgroup 0 means
/// heterogeneous or independent; interdependent subgroups count from 1 and
/// report their shared interaction count, all other rows the tree's own.
pub fn taxonomy_csv(trees: &[TemporalTree], taxonomy: &TreeTaxonomy) -> String {
    // family tag, group id, subgroup id, interaction count per tree
    let mut rows: Vec<(&str, usize, usize, usize)> = vec![("", 0, 0, 0); trees.len()];
    let mut group_id = 0;
    for group in &taxonomy.het_same {
        group_id += 1;
        for &i in &group.trees {
            rows[i] = ("het", group_id, 0, trees[i].interactions().len());
        }
    }
    if !taxonomy.het_diff.is_empty() {
        group_id += 1;
        for &i in &taxonomy.het_diff {
            rows[i] = ("het", group_id, 0, trees[i].interactions().len());
        }
    }
    for group in &taxonomy.hom {
        group_id += 1;
        for &i in &group.independent {
            rows[i] = ("hom", group_id, 0, trees[i].interactions().len());
        }
        for (k, sub) in group.interdependent.iter().enumerate() {
            for &i in &sub.trees {
                rows[i] = ("hom", group_id, k + 1, sub.shared.len());
            }
        }
    }

    let mut out = String::from("tree_t,family,group_id,subgroup_id,nodes,interactions\n");
    for (i, (family, group, subgroup, interactions)) in rows.into_iter().enumerate() {
        out.push_str(&format!(
            "{},{family},{group},{subgroup},{},{interactions}\n",
            i + 1,
            trees[i].node_count(),
        ));
    }
    out
}
