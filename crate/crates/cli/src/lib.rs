//! Experiment runners behind the `tcc` binary.
//!
//! The pure `*_csv` builders turn a network into report text and are what
//! the integration tests exercise; the `run_*` wrappers load the input,
//! write the files under the output directory and announce each file on
//! stdout. Everything is deterministic: the same spec produces byte
//! identical CSV output, whatever the worker count.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use tcc_core::controllability::{self, CentralityConfig, CentralityReport};
use tcc_core::synth::{self, SynthConfig};
use tcc_core::temporal_graph::{parse_contact_list, ParseOptions};
use tcc_core::trees::{self, BoundsReport};
use tcc_core::{NodeId, TemporalNetwork};

/// where the network comes from; a spec carries exactly one source
#[derive(Debug, Clone)]
pub enum InputSource {
    /// contact-list file, timestamps grouped into windows of this width
    File { path: PathBuf, window: u64 },
    /// seeded random network with `n` nodes, contact probability `p` per
    /// pair and step, and `horizon` steps
    Synth { n: usize, p: f64, horizon: usize },
}

/// which nodes get the controller
#[derive(Debug, Clone)]
pub enum Selection {
    All,
    Node(String),
}

/// one fully specified experiment
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub source: InputSource,
    pub selection: Selection,
    pub prime: u64,
    pub trials: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
}

impl ExperimentSpec {
    fn config(&self) -> CentralityConfig {
        CentralityConfig {
            prime: self.prime,
            trials: self.trials,
            seed: self.seed,
        }
    }
}

/// Loads the network named by the spec. Synthetic networks reuse the
/// spec's master seed, so one `--seed` pins the whole experiment.
pub fn load_input(spec: &ExperimentSpec) -> Result<TemporalNetwork> {
    match &spec.source {
        InputSource::File { path, window } => {
            let file = fs::File::open(path)
                .with_context(|| format!("cannot open {}", path.display()))?;
            let options = ParseOptions {
                window: *window,
                rebase: false,
            };
            let outcome = parse_contact_list(BufReader::new(file), &options)
                .with_context(|| format!("cannot parse {}", path.display()))?;
            if outcome.self_loops_rejected > 0 || outcome.duplicates_collapsed > 0 {
                eprintln!(
                    "note: {}: dropped {} self loops, collapsed {} duplicate contacts",
                    path.display(),
                    outcome.self_loops_rejected,
                    outcome.duplicates_collapsed
                );
            }
            Ok(outcome.network)
        }
        InputSource::Synth { n, p, horizon } => {
            let config = SynthConfig {
                n: *n,
                p: *p,
                horizon: *horizon,
                seed: spec.seed,
            };
            Ok(synth::generate(&config)?)
        }
    }
}

fn selected_nodes(spec: &ExperimentSpec, net: &TemporalNetwork) -> Result<Vec<NodeId>> {
    match &spec.selection {
        Selection::All => Ok((0..net.node_count() as NodeId).collect()),
        Selection::Node(label) => match net.node_id(label) {
            Some(id) => Ok(vec![id]),
            None => bail!("unknown node `{label}`"),
        },
    }
}

fn centrality_reports(
    net: &TemporalNetwork,
    nodes: &[NodeId],
    config: &CentralityConfig,
) -> Result<Vec<CentralityReport>> {
    if nodes.len() == net.node_count() {
        Ok(controllability::centrality_all(net, config)?)
    } else {
        let mut out = Vec::with_capacity(nodes.len());
        for &node in nodes {
            out.push(controllability::controlling_centrality(net, node, config)?);
        }
        Ok(out)
    }
}

fn bounds_reports(net: &TemporalNetwork, nodes: &[NodeId]) -> Result<Vec<BoundsReport>> {
    if nodes.len() == net.node_count() {
        Ok(trees::bounds_all(net)?)
    } else {
        let mut out = Vec::with_capacity(nodes.len());
        for &node in nodes {
            out.push(trees::bounds_for(net, node)?);
        }
        Ok(out)
    }
}

/// full centrality report, one row per selected node
pub fn centrality_csv(
    net: &TemporalNetwork,
    nodes: &[NodeId],
    config: &CentralityConfig,
) -> Result<String> {
    let ranks = centrality_reports(net, nodes, config)?;
    let bounds = bounds_reports(net, nodes)?;
    let mut out = String::from("node,S_M,lower,upper,aggregated_degree\n");
    for (rank, bound) in ranks.iter().zip(&bounds) {
        let degree = net.aggregated_degree(rank.node)?;
        writeln!(
            out,
            "{},{},{},{},{}",
            net.label(rank.node),
            rank.s_m,
            bound.lower,
            bound.upper,
            degree
        )
        .unwrap();
    }
    Ok(out)
}

/// bounds alone, skipping the centrality computation
pub fn bounds_csv(net: &TemporalNetwork, nodes: &[NodeId]) -> Result<String> {
    let bounds = bounds_reports(net, nodes)?;
    let mut out = String::from("node,lower,upper\n");
    for bound in &bounds {
        writeln!(out, "{},{},{}", net.label(bound.node), bound.lower, bound.upper).unwrap();
    }
    Ok(out)
}

/// tree classification table for one controlled node
pub fn taxonomy_table(net: &TemporalNetwork, node: NodeId) -> Result<String> {
    let extracted = trees::extract_trees(net, node)?;
    let taxonomy = trees::classify(&extracted);
    Ok(trees::taxonomy_csv(&extracted, &taxonomy))
}

/// a node whose computed centrality escaped its analytic bounds
#[derive(Debug, Clone)]
pub struct Violation {
    pub node: NodeId,
    pub label: String,
    pub calculated: usize,
    pub lower: usize,
    pub upper: usize,
    /// classification table of the offending node's trees
    pub taxonomy: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "node {}: calculated {} outside [{}, {}]",
            self.label, self.calculated, self.lower, self.upper
        )
    }
}

/// Compares every node's computed centrality against its bounds. The CSV
/// always carries all rows; violations come back separately so the caller
/// can decide how loudly to fail.
pub fn fig5_rows(
    net: &TemporalNetwork,
    config: &CentralityConfig,
) -> Result<(String, Vec<Violation>)> {
    let nodes: Vec<NodeId> = (0..net.node_count() as NodeId).collect();
    let ranks = centrality_reports(net, &nodes, config)?;
    let bounds = bounds_reports(net, &nodes)?;
    let mut out = String::from("node,calculated,lower,upper\n");
    let mut violations = Vec::new();
    for (rank, bound) in ranks.iter().zip(&bounds) {
        writeln!(
            out,
            "{},{},{},{}",
            net.label(rank.node),
            rank.s_m,
            bound.lower,
            bound.upper
        )
        .unwrap();
        if rank.s_m < bound.lower || rank.s_m > bound.upper {
            violations.push(Violation {
                node: rank.node,
                label: net.label(rank.node).to_string(),
                calculated: rank.s_m,
                lower: bound.lower,
                upper: bound.upper,
                taxonomy: taxonomy_table(net, rank.node)?,
            });
        }
    }
    Ok((out, violations))
}

/// per-node gap between the bounds, next to the degree
pub fn fig6_rows(net: &TemporalNetwork) -> Result<String> {
    if net.events().is_empty() {
        bail!("the contact list has no events, nothing to report");
    }
    let nodes: Vec<NodeId> = (0..net.node_count() as NodeId).collect();
    let bounds = bounds_reports(net, &nodes)?;
    let mut out = String::from("node,aggregated_degree,gap\n");
    for bound in &bounds {
        let degree = net.aggregated_degree(bound.node)?;
        writeln!(
            out,
            "{},{},{}",
            net.label(bound.node),
            degree,
            bound.upper - bound.lower
        )
        .unwrap();
    }
    Ok(out)
}

/// mean centrality within each aggregated-degree class
pub fn fig7_rows(net: &TemporalNetwork, config: &CentralityConfig) -> Result<String> {
    if net.events().is_empty() {
        bail!("the contact list has no events, nothing to report");
    }
    let nodes: Vec<NodeId> = (0..net.node_count() as NodeId).collect();
    let ranks = centrality_reports(net, &nodes, config)?;
    let mut classes: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for rank in &ranks {
        let degree = net.aggregated_degree(rank.node)?;
        let entry = classes.entry(degree).or_insert((0, 0));
        entry.0 += rank.s_m;
        entry.1 += 1;
    }
    let mut out = String::from("aggregated_degree,mean_centrality,count\n");
    for (degree, (total, count)) in classes {
        let mean = total as f64 / count as f64;
        writeln!(out, "{},{:.6},{}", degree, mean, count).unwrap();
    }
    Ok(out)
}

/// centrality histogram; the counts always add up to the node count
pub fn fig8_rows(net: &TemporalNetwork, config: &CentralityConfig) -> Result<String> {
    let nodes: Vec<NodeId> = (0..net.node_count() as NodeId).collect();
    let ranks = centrality_reports(net, &nodes, config)?;
    let mut bins: BTreeMap<usize, usize> = BTreeMap::new();
    for rank in &ranks {
        *bins.entry(rank.s_m).or_insert(0) += 1;
    }
    let mut out = String::from("centrality_value,node_count\n");
    for (value, count) in bins {
        writeln!(out, "{},{}", value, count).unwrap();
    }
    Ok(out)
}

fn write_report(out_dir: &Path, name: &str, content: &str) -> Result<PathBuf> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create {}", out_dir.display()))?;
    let path = out_dir.join(name);
    fs::write(&path, content).with_context(|| format!("cannot write {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(path)
}

/// materializes the input network as a contact list
pub fn run_synth(spec: &ExperimentSpec) -> Result<PathBuf> {
    let net = load_input(spec)?;
    write_report(&spec.out_dir, "contacts.tsv", &net.to_contact_list())
}

/// centrality with bounds and degree for the selected nodes
pub fn run_centrality(spec: &ExperimentSpec) -> Result<PathBuf> {
    let net = load_input(spec)?;
    let nodes = selected_nodes(spec, &net)?;
    let csv = centrality_csv(&net, &nodes, &spec.config())?;
    write_report(&spec.out_dir, "centrality.csv", &csv)
}

/// bounds alone; a single-node selection also gets its taxonomy table
pub fn run_bounds(spec: &ExperimentSpec) -> Result<Vec<PathBuf>> {
    let net = load_input(spec)?;
    let nodes = selected_nodes(spec, &net)?;
    let csv = bounds_csv(&net, &nodes)?;
    let mut written = vec![write_report(&spec.out_dir, "bounds.csv", &csv)?];
    if let [node] = nodes[..] {
        let table = taxonomy_table(&net, node)?;
        written.push(write_report(&spec.out_dir, "taxonomy.csv", &table)?);
    }
    Ok(written)
}

pub struct Fig5Outcome {
    pub path: PathBuf,
    pub violations: Vec<Violation>,
}

/// computed centrality next to its bounds for every node
pub fn run_fig5(spec: &ExperimentSpec) -> Result<Fig5Outcome> {
    let net = load_input(spec)?;
    let (csv, violations) = fig5_rows(&net, &spec.config())?;
    let path = write_report(&spec.out_dir, "fig5.csv", &csv)?;
    Ok(Fig5Outcome { path, violations })
}

/// bound gap per node; the bounds come from counting tree groups, so this
/// is far cheaper than the full centrality
pub fn run_fig6(spec: &ExperimentSpec) -> Result<PathBuf> {
    let net = load_input(spec)?;
    let csv = fig6_rows(&net)?;
    write_report(&spec.out_dir, "fig6.csv", &csv)
}

/// bound gaps and the degree/centrality relation, in one pass
pub fn run_fig6_fig7(spec: &ExperimentSpec) -> Result<(PathBuf, PathBuf)> {
    let net = load_input(spec)?;
    let fig6 = fig6_rows(&net)?;
    let fig7 = fig7_rows(&net, &spec.config())?;
    let p6 = write_report(&spec.out_dir, "fig6.csv", &fig6)?;
    let p7 = write_report(&spec.out_dir, "fig7.csv", &fig7)?;
    Ok((p6, p7))
}

/// centrality histogram over all nodes
pub fn run_fig8(spec: &ExperimentSpec) -> Result<PathBuf> {
    let net = load_input(spec)?;
    let csv = fig8_rows(&net, &spec.config())?;
    write_report(&spec.out_dir, "fig8.csv", &csv)
}

/// Spearman rank correlation with average ranks on ties. Returns 0 when
/// either side is constant, since the coefficient is undefined there.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "paired samples only");
    let rx = average_ranks(x);
    let ry = average_ranks(y);
    pearson(&rx, &ry)
}

fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // ranks are 1-based; a tie block shares the mean of its positions
        let shared = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = shared;
        }
        i = j + 1;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (a, b) in x.iter().zip(y) {
        cov += (a - mx) * (b - my);
        vx += (a - mx) * (a - mx);
        vy += (b - my) * (b - my);
    }
    if vx == 0.0 || vy == 0.0 {
        return 0.0;
    }
    cov / (vx * vy).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_spec(source: InputSource) -> ExperimentSpec {
        ExperimentSpec {
            source,
            selection: Selection::All,
            prime: tcc_core::field::DEFAULT_PRIME,
            trials: 2,
            seed: 7,
            out_dir: PathBuf::from("unused"),
        }
    }

    #[test]
    fn quiet_network_reports_unit_rows() {
        let spec = tiny_spec(InputSource::Synth {
            n: 5,
            p: 0.0,
            horizon: 3,
        });
        let net = load_input(&spec).unwrap();
        let (csv, violations) = fig5_rows(&net, &spec.config()).unwrap();
        assert!(violations.is_empty());
        for line in csv.lines().skip(1) {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(&fields[1..], &["1", "1", "1"]);
        }
    }

    #[test]
    fn histogram_conserves_the_node_count() {
        let spec = tiny_spec(InputSource::Synth {
            n: 7,
            p: 0.0,
            horizon: 2,
        });
        let net = load_input(&spec).unwrap();
        let csv = fig8_rows(&net, &spec.config()).unwrap();
        assert_eq!(csv, "centrality_value,node_count\n1,7\n");
    }

    #[test]
    fn degree_report_rejects_an_empty_dataset() {
        let spec = tiny_spec(InputSource::Synth {
            n: 4,
            p: 0.0,
            horizon: 2,
        });
        let net = load_input(&spec).unwrap();
        assert!(fig6_rows(&net).is_err());
        assert!(fig7_rows(&net, &spec.config()).is_err());
    }

    #[test]
    fn unknown_labels_are_refused() {
        let mut spec = tiny_spec(InputSource::Synth {
            n: 3,
            p: 0.0,
            horizon: 2,
        });
        spec.selection = Selection::Node("nope".into());
        let net = load_input(&spec).unwrap();
        assert!(selected_nodes(&spec, &net).is_err());
    }

    #[test]
    fn rank_correlation_handles_ties() {
        let x = [1.0, 2.0, 2.0, 3.0];
        let y = [10.0, 20.0, 20.0, 30.0];
        assert!((spearman(&x, &y) - 1.0).abs() < 1e-12);
        let flipped = [30.0, 20.0, 20.0, 10.0];
        assert!((spearman(&x, &flipped) + 1.0).abs() < 1e-12);
        let constant = [5.0, 5.0, 5.0, 5.0];
        assert_eq!(spearman(&x, &constant), 0.0);
    }
}
