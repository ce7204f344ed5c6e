//! Group-level dependence networks: every ordered pair of column groups gets
//! a directed edge weighted by the dependence of the target group on the
//! source group.

use crate::CliError;
use multidep::{t_n, Dataset, Matrix, RngConfig, TiePolicy};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct GraphNode {
    pub name: String,
    pub columns: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphEdge {
    pub source: String,
    pub target: String,
    pub weight: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DependenceGraph {
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
}

/// Parses `NAME=col1,col2;NAME2=col3,...` into named groups.
pub fn parse_groups(spec: &str) -> Result<Vec<GraphNode>, CliError> {
    let mut groups = Vec::new();
    for part in spec.split(';').filter(|p| !p.trim().is_empty()) {
        let (name, cols) = part
            .split_once('=')
            .ok_or_else(|| CliError::config(format!("group `{part}` is not NAME=col,col")))?;
        let name = name.trim().to_string();
        if name.is_empty() {
            return Err(CliError::config("empty group name"));
        }
        let columns: Vec<String> = cols
            .split(',')
            .map(|c| c.trim().to_string())
            .filter(|c| !c.is_empty())
            .collect();
        if columns.is_empty() {
            return Err(CliError::config(format!("group `{name}` has no columns")));
        }
        groups.push(GraphNode { name, columns });
    }
    if groups.len() < 2 {
        return Err(CliError::config("need at least two groups"));
    }
    let mut names = std::collections::HashSet::new();
    let mut seen_cols = std::collections::HashSet::new();
    for g in &groups {
        if !names.insert(g.name.clone()) {
            return Err(CliError::config(format!("duplicate group name `{}`", g.name)));
        }
        for c in &g.columns {
            if !seen_cols.insert(c.clone()) {
                return Err(CliError::config(format!(
                    "column `{c}` appears in more than one group"
                )));
            }
        }
    }
    Ok(groups)
}

/// Builds the full directed graph over the groups.
pub fn build_graph(
    dataset: &Dataset,
    groups: &[GraphNode],
    policy: TiePolicy,
    rng: RngConfig,
    rank_predictors: bool,
) -> Result<DependenceGraph, CliError> {
    let blocks: Vec<Matrix> = groups
        .iter()
        .map(|g| {
            dataset
                .select(&g.columns)
                .map_err(|e| CliError::config(e.to_string()))
        })
        .collect::<Result<_, _>>()?;
    let mut edges = Vec::new();
    let mut pair = 0u64;
    for (a, source) in groups.iter().enumerate() {
        for (b, target) in groups.iter().enumerate() {
            if a == b {
                continue;
            }
            let estimate = t_n(
                &blocks[b],
                &blocks[a],
                policy,
                rng.root().fork(pair),
                rank_predictors,
            )
            .map_err(CliError::compute)?;
            edges.push(GraphEdge {
                source: source.name.clone(),
                target: target.name.clone(),
                weight: estimate.value,
            });
            pair += 1;
        }
    }
    Ok(DependenceGraph {
        nodes: groups.to_vec(),
        edges,
    })
}

fn dot_quote(name: &str) -> String {
    name.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT rendering; edges with weight below `min_weight` are omitted and labels
/// carry the weight rounded to two decimals.
pub fn render_dot(graph: &DependenceGraph, min_weight: f64) -> String {
    let mut out = String::from("digraph dependence {\n");
    for node in &graph.nodes {
        out.push_str(&format!("    \"{}\";\n", dot_quote(&node.name)));
    }
    for edge in &graph.edges {
        if edge.weight < min_weight {
            continue;
        }
        out.push_str(&format!(
            "    \"{}\" -> \"{}\" [label=\"{:.2}\"];\n",
            dot_quote(&edge.source),
            dot_quote(&edge.target),
            edge.weight
        ));
    }
    out.push_str("}\n");
    out
}
