//! Weighted undirected graphs, labeled graph collections and TU-format ingestion.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::derive_seed;

/// Undirected weighted graph with 1-based vertex ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Graph {
    n_vertices: usize,
    edges: Vec<(usize, usize, f64)>,
}

/// Internal wire form `{"n_vertices": n, "edges": [[u, v, w], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    n_vertices: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(json: GraphJson) -> Result<Self> {
        Graph::new(json.n_vertices, json.edges)
    }
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> Self {
        GraphJson {
            n_vertices: g.n_vertices,
            edges: g.edges,
        }
    }
}

impl Graph {
    /// Builds a graph, rejecting self-loops, out-of-range ids, non-positive
    /// weights and repeated unordered pairs.
    pub fn new(n_vertices: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        if n_vertices == 0 {
            return Err(Error::domain("graph must have at least one vertex"));
        }
        let mut seen = BTreeSet::new();
        for &(u, v, w) in &edges {
            if u == 0 || v == 0 || u > n_vertices || v > n_vertices {
                return Err(Error::domain(format!(
                    "edge ({u}, {v}) outside vertex range 1..={n_vertices}"
                )));
            }
            if u == v {
                return Err(Error::domain(format!("self-loop on vertex {u}")));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::domain(format!("edge ({u}, {v}) has weight {w}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::domain(format!("duplicate edge ({u}, {v})")));
            }
        }
        Ok(Self { n_vertices, edges })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    pub fn weighted_degree(&self, v: usize) -> Result<f64> {
        if v == 0 || v > self.n_vertices {
            return Err(Error::domain(format!(
                "vertex {v} outside 1..={}",
                self.n_vertices
            )));
        }
        Ok(self
            .edges
            .iter()
            .filter(|&&(a, b, _)| a == v || b == v)
            .map(|e| e.2)
            .sum())
    }

    /// Weighted degree of every vertex in one pass; index `i` holds vertex `i + 1`.
    pub fn weighted_degrees(&self) -> Vec<f64> {
        let mut deg = vec![0.0; self.n_vertices];
        for &(u, v, w) in &self.edges {
            deg[u - 1] += w;
            deg[v - 1] += w;
        }
        deg
    }

    /// Dense symmetric weighted adjacency matrix, row-major, 0-based.
    pub fn adjacency_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.n_vertices;
        let mut a = vec![vec![0.0; n]; n];
        for &(u, v, w) in &self.edges {
            a[u - 1][v - 1] = w;
            a[v - 1][u - 1] = w;
        }
        a
    }

    /// Returns the graph with vertex `v` renamed to `perm[v - 1]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        let mut check: Vec<usize> = perm.to_vec();
        check.sort_unstable();
        if check != (1..=self.n_vertices).collect::<Vec<_>>() {
            return Err(Error::domain("relabeling is not a permutation of 1..=n"));
        }
        let edges = self
            .edges
            .iter()
            .map(|&(u, v, w)| (perm[u - 1], perm[v - 1], w))
            .collect();
        Graph::new(self.n_vertices, edges)
    }
}

pub fn weighted_degree(g: &Graph, v: usize) -> Result<f64> {
    g.weighted_degree(v)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledGraphSet {
    pub name: String,
    pub graphs: Vec<Graph>,
    pub labels: Vec<usize>,
    pub class_count: usize,
}

impl LabeledGraphSet {
    pub fn new(
        name: impl Into<String>,
        graphs: Vec<Graph>,
        labels: Vec<usize>,
        class_count: usize,
    ) -> Result<Self> {
        if graphs.is_empty() {
            return Err(Error::domain("labeled graph set is empty"));
        }
        if graphs.len() != labels.len() {
            return Err(Error::domain(format!(
                "{} graphs but {} labels",
                graphs.len(),
                labels.len()
            )));
        }
        if class_count < 2 {
            return Err(Error::domain("need at least two classes"));
        }
        if let Some(bad) = labels.iter().find(|&&l| l >= class_count) {
            return Err(Error::domain(format!(
                "label {bad} outside 0..{class_count}"
            )));
        }
        Ok(Self {
            name: name.into(),
            graphs,
            labels,
            class_count,
        })
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.class_count];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    pub fn max_vertices(&self) -> usize {
        self.graphs.iter().map(Graph::n_vertices).max().unwrap_or(0)
    }

    /// Subset by index, preserving the given order and the class count.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        Self::new(
            self.name.clone(),
            indices.iter().map(|&i| self.graphs[i].clone()).collect(),
            indices.iter().map(|&i| self.labels[i]).collect(),
            self.class_count,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeWeightMode {
    #[default]
    Uniform,
    FromEdgeLabels,
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut lines: Vec<String> = text.lines().map(|l| l.trim().to_owned()).collect();
    while lines.last().is_some_and(|l| l.is_empty()) {
        lines.pop();
    }
    Ok(lines)
}

fn parse_int(path: &Path, line: usize, field: &str) -> Result<i64> {
    field.trim().parse::<i64>().map_err(|_| Error::Parse {
        file: path.to_path_buf(),
        line,
        message: format!("expected an integer, found {field:?}"),
    })
}

fn parse_error(file: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        file: file.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Loads a TU Dortmund benchmark directory.
///
/// Node attributes and node labels are ignored. Self-loops in `_A.txt` are
/// skipped; both directions of an edge collapse to one undirected edge whose
/// weight comes from its first occurrence.
pub fn load_tu_dataset(
    directory: &Path,
    name: &str,
    edge_weight_mode: EdgeWeightMode,
) -> Result<LabeledGraphSet> {
    let file = |suffix: &str| -> PathBuf { directory.join(format!("{name}_{suffix}.txt")) };
    let a_path = file("A");
    let ind_path = file("graph_indicator");
    let lab_path = file("graph_labels");
    let el_path = file("edge_labels");

    let indicator_lines = read_lines(&ind_path)?;
    let mut node_graph = Vec::with_capacity(indicator_lines.len());
    for (i, l) in indicator_lines.iter().enumerate() {
        let g = parse_int(&ind_path, i + 1, l)?;
        if g < 1 {
            return Err(parse_error(&ind_path, i + 1, format!("graph id {g} < 1")));
        }
        node_graph.push(g as usize);
    }

    let label_lines = read_lines(&lab_path)?;
    let raw_labels = label_lines
        .iter()
        .enumerate()
        .map(|(i, l)| parse_int(&lab_path, i + 1, l))
        .collect::<Result<Vec<_>>>()?;
    let n_graphs = raw_labels.len();
    if n_graphs == 0 {
        return Err(parse_error(&lab_path, 1, "no graph labels"));
    }
    if let Some((i, &g)) = node_graph.iter().enumerate().find(|(_, &g)| g > n_graphs) {
        return Err(parse_error(
            &ind_path,
            i + 1,
            format!("graph id {g} but only {n_graphs} graph labels"),
        ));
    }

    // Renumber nodes 1..N_G within each graph, in file order.
    let mut local_id = vec![0usize; node_graph.len()];
    let mut sizes = vec![0usize; n_graphs];
    for (node, &g) in node_graph.iter().enumerate() {
        sizes[g - 1] += 1;
        local_id[node] = sizes[g - 1];
    }
    if let Some(g) = sizes.iter().position(|&s| s == 0) {
        return Err(parse_error(
            &ind_path,
            indicator_lines.len(),
            format!("graph {} has no nodes", g + 1),
        ));
    }

    let edge_labels = match edge_weight_mode {
        EdgeWeightMode::Uniform => None,
        EdgeWeightMode::FromEdgeLabels => Some(
            read_lines(&el_path)?
                .iter()
                .enumerate()
                .map(|(i, l)| parse_int(&el_path, i + 1, l))
                .collect::<Result<Vec<_>>>()?,
        ),
    };

    let a_lines = read_lines(&a_path)?;
    if let Some(el) = &edge_labels {
        if el.len() != a_lines.len() {
            return Err(parse_error(
                &el_path,
                el.len(),
                format!("{} edge labels for {} edges", el.len(), a_lines.len()),
            ));
        }
    }
    let mut edges: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); n_graphs];
    let mut seen: Vec<HashSet<(usize, usize)>> = vec![HashSet::new(); n_graphs];
    for (i, l) in a_lines.iter().enumerate() {
        let line = i + 1;
        let mut parts = l.split(',');
        let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(parse_error(
                &a_path,
                line,
                format!("expected 'u, v', found {l:?}"),
            ));
        };
        let (u, v) = (parse_int(&a_path, line, a)?, parse_int(&a_path, line, b)?);
        for x in [u, v] {
            if x < 1 || x as usize > node_graph.len() {
                return Err(parse_error(
                    &a_path,
                    line,
                    format!("node id {x} outside 1..={}", node_graph.len()),
                ));
            }
        }
        let (u, v) = (u as usize - 1, v as usize - 1);
        let (gu, gv) = (node_graph[u], node_graph[v]);
        if gu != gv {
            return Err(parse_error(
                &a_path,
                line,
                format!("edge joins graph {gu} and graph {gv}"),
            ));
        }
        if u == v {
            continue;
        }
        let (lu, lv) = (local_id[u], local_id[v]);
        let key = (lu.min(lv), lu.max(lv));
        if !seen[gu - 1].insert(key) {
            continue;
        }
        let weight = match &edge_labels {
            None => 1.0,
            Some(el) => {
                let w = el[i] as f64 + 1.0;
                if w <= 0.0 {
                    return Err(parse_error(
                        &el_path,
                        line,
                        format!("edge label {} < 0", el[i]),
                    ));
                }
                w
            }
        };
        edges[gu - 1].push((key.0, key.1, weight));
    }

    let distinct: BTreeSet<i64> = raw_labels.iter().copied().collect();
    let remap: HashMap<i64, usize> = distinct.iter().enumerate().map(|(k, &r)| (r, k)).collect();
    let labels: Vec<usize> = raw_labels.iter().map(|r| remap[r]).collect();

    let graphs = sizes
        .into_iter()
        .zip(edges)
        .map(|(n, e)| Graph::new(n, e))
        .collect::<Result<Vec<_>>>()?;
    LabeledGraphSet::new(name, graphs, labels, distinct.len().max(2))
}

/// Per-class seeded split. Each class sends `round(size · test_fraction)`
/// members to the test side, at least one and at most `size - 1`. Both sides
/// keep the original dataset order.
pub fn stratified_split(
    ds: &LabeledGraphSet,
    test_fraction: f64,
    seed: u64,
) -> Result<(LabeledGraphSet, LabeledGraphSet)> {
    let (train, test) = stratified_split_indices(ds, test_fraction, seed)?;
    Ok((ds.select(&train)?, ds.select(&test)?))
}

pub fn stratified_split_indices(
    ds: &LabeledGraphSet,
    test_fraction: f64,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::domain(format!(
            "test fraction {test_fraction} outside (0, 1)"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut is_test = vec![false; ds.len()];
    for class in 0..ds.class_count {
        let mut members: Vec<usize> = (0..ds.len()).filter(|&i| ds.labels[i] == class).collect();
        if members.is_empty() {
            continue;
        }
        if members.len() < 2 {
            return Err(Error::domain(format!(
                "class {class} has {} member(s); stratified split needs at least 2",
                members.len()
            )));
        }
        let n_test =
            ((members.len() as f64 * test_fraction).round() as usize).clamp(1, members.len() - 1);
        members.shuffle(&mut rng);
        for &i in &members[..n_test] {
            is_test[i] = true;
        }
    }
    let train = (0..ds.len()).filter(|&i| !is_test[i]).collect();
    let test = (0..ds.len()).filter(|&i| is_test[i]).collect();
    Ok((train, test))
}

/// Seeded class-proportional subset of about `n` graphs, in original order.
pub fn stratified_subset(ds: &LabeledGraphSet, n: usize, seed: u64) -> Result<LabeledGraphSet> {
    if n >= ds.len() {
        return Ok(ds.clone());
    }
    let (_, keep) = stratified_split_indices(ds, n as f64 / ds.len() as f64, seed)?;
    ds.select(&keep)
}

/// Erdős–Rényi draw with unit weights; pairs are visited in lexicographic order.
pub fn random_graph(n_vertices: usize, edge_prob: f64, seed: u64) -> Result<Graph> {
    if n_vertices == 0 {
        return Err(Error::domain("random graph needs at least one vertex"));
    }
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(Error::domain(format!(
            "edge probability {edge_prob} outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 1..=n_vertices {
        for v in u + 1..=n_vertices {
            if rng.gen::<f64>() < edge_prob {
                edges.push((u, v, 1.0));
            }
        }
    }
    Graph::new(n_vertices, edges)
}

pub fn complete_graph(n_vertices: usize) -> Result<Graph> {
    random_graph(n_vertices, 1.0, 0)
}

/// One class of a synthetic density task: `random_graph(n_vertices, edge_prob, _)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityClass {
    pub n_vertices: usize,
    pub edge_prob: f64,
}

/// Synthetic binary task: alternating sparse and dense random graphs, labeled
/// 1 when the edge count exceeds the median edge count of the set.
pub fn density_dataset(
    n_graphs: usize,
    sparse: DensityClass,
    dense: DensityClass,
    seed: u64,
) -> Result<LabeledGraphSet> {
    if n_graphs < 2 {
        return Err(Error::domain("density dataset needs at least two graphs"));
    }
    for c in [sparse, dense] {
        if c.n_vertices < 2 || c.edge_prob <= 0.0 {
            return Err(Error::domain(
                "density classes need two vertices and a positive edge probability",
            ));
        }
    }
    let mut stream = 0;
    let mut graphs = Vec::with_capacity(n_graphs);
    for i in 0..n_graphs {
        let c = if i % 2 == 0 { sparse } else { dense };
        // Edgeless draws encode to the zero operator, so they are redrawn.
        loop {
            let g = random_graph(c.n_vertices, c.edge_prob, derive_seed(seed, stream))?;
            stream += 1;
            if g.n_edges() > 0 {
                graphs.push(g);
                break;
            }
        }
    }
    let mut counts: Vec<usize> = graphs.iter().map(Graph::n_edges).collect();
    counts.sort_unstable();
    let mid = counts.len() / 2;
    let median = (counts[mid - 1] + counts[mid]) as f64 / 2.0;
    let labels: Vec<usize> = graphs
        .iter()
        .map(|g| usize::from(g.n_edges() as f64 > median))
        .collect();
    if labels.iter().all(|&l| l == labels[0]) {
        return Err(Error::Degenerate(
            "all synthetic graphs share one edge count".into(),
        ));
    }
    LabeledGraphSet::new("density", graphs, labels, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn path3() -> Graph {
        Graph::new(3, vec![(1, 2, 0.5), (2, 3, 1.5)]).unwrap()
    }

    #[test]
    fn weighted_degree_examples() {
        let tri = complete_graph(3).unwrap();
        for v in 1..=3 {
            assert_eq!(weighted_degree(&tri, v).unwrap(), 2.0);
        }
        let isolated = Graph::new(2, vec![]).unwrap();
        assert_eq!(isolated.weighted_degree(1).unwrap(), 0.0);
        assert_eq!(path3().weighted_degree(2).unwrap(), 2.0);
        assert!(path3().weighted_degree(0).is_err());
        assert!(path3().weighted_degree(4).is_err());
        assert_eq!(path3().weighted_degrees(), vec![0.5, 2.0, 1.5]);
    }

    #[test]
    fn graph_rejects_bad_edges() {
        assert!(Graph::new(0, vec![]).is_err());
        assert!(Graph::new(2, vec![(1, 1, 1.0)]).is_err());
        assert!(Graph::new(2, vec![(1, 3, 1.0)]).is_err());
        assert!(Graph::new(2, vec![(1, 2, 0.0)]).is_err());
        assert!(Graph::new(2, vec![(1, 2, 1.0), (2, 1, 1.0)]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = path3();
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(text, r#"{"n_vertices":3,"edges":[[1,2,0.5],[2,3,1.5]]}"#);
        assert_eq!(serde_json::from_str::<Graph>(&text).unwrap(), g);
        assert!(serde_json::from_str::<Graph>(r#"{"n_vertices":1,"edges":[[1,1,1.0]]}"#).is_err());
    }

    #[test]
    fn density_dataset_labels_follow_edge_count() {
        let sparse = DensityClass {
            n_vertices: 7,
            edge_prob: 0.6,
        };
        let dense = DensityClass {
            n_vertices: 10,
            edge_prob: 0.9,
        };
        let ds = density_dataset(20, sparse, dense, 0).unwrap();
        assert_eq!(ds.class_sizes(), vec![10, 10]);
        for (i, (g, &l)) in ds.graphs.iter().zip(&ds.labels).enumerate() {
            assert_eq!(l, i % 2);
            assert!(g.n_edges() > 0);
        }
        assert_eq!(ds, density_dataset(20, sparse, dense, 0).unwrap());
        assert!(density_dataset(1, sparse, dense, 0).is_err());
        let full = DensityClass {
            n_vertices: 5,
            edge_prob: 1.0,
        };
        assert!(matches!(
            density_dataset(4, full, full, 0),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn random_graph_examples() {
        let g = random_graph(5, 0.0, 9).unwrap();
        assert_eq!((g.n_vertices(), g.n_edges()), (5, 0));
        assert_eq!(random_graph(4, 1.0, 3).unwrap().n_edges(), 6);
        assert_eq!(
            random_graph(30, 0.2, 11).unwrap(),
            random_graph(30, 0.2, 11).unwrap()
        );
        assert!(random_graph(3, 1.5, 0).is_err());
    }

    fn toy_set(sizes: &[usize]) -> LabeledGraphSet {
        let mut graphs = Vec::new();
        let mut labels = Vec::new();
        for (class, &n) in sizes.iter().enumerate() {
            for i in 0..n {
                graphs.push(random_graph(4, 0.5, (class * 100 + i) as u64).unwrap());
                labels.push(class);
            }
        }
        LabeledGraphSet::new("toy", graphs, labels, sizes.len()).unwrap()
    }

    #[test]
    fn split_mutag_shaped_counts() {
        // MUTAG class sizes: 63 and 125.
        let ds = toy_set(&[63, 125]);
        let (train, test) = stratified_split(&ds, 0.1, 0).unwrap();
        assert_eq!((train.len(), test.len()), (169, 19));
        assert_eq!(test.class_sizes(), vec![6, 13]);
    }

    #[test]
    fn split_half_and_determinism() {
        let ds = toy_set(&[2, 2]);
        let (train, test) = stratified_split(&ds, 0.5, 4).unwrap();
        assert_eq!(train.class_sizes(), vec![1, 1]);
        assert_eq!(test.class_sizes(), vec![1, 1]);
        let ds = toy_set(&[10, 17]);
        assert_eq!(
            stratified_split_indices(&ds, 0.3, 77).unwrap(),
            stratified_split_indices(&ds, 0.3, 77).unwrap()
        );
    }

    #[test]
    fn split_errors() {
        let ds = toy_set(&[1, 5]);
        assert!(matches!(
            stratified_split(&ds, 0.1, 0),
            Err(Error::Domain(_))
        ));
        let ds = toy_set(&[3, 3]);
        assert!(stratified_split(&ds, 0.0, 0).is_err());
        assert!(stratified_split(&ds, 1.0, 0).is_err());
    }

    #[test]
    fn split_partitions_and_keeps_proportions() {
        for seed in 0..20 {
            let ds = toy_set(&[7, 23, 12]);
            let (tr, te) = stratified_split_indices(&ds, 0.25, seed).unwrap();
            let mut all: Vec<_> = tr.iter().chain(&te).copied().collect();
            all.sort_unstable();
            assert_eq!(all, (0..ds.len()).collect::<Vec<_>>());
            let te_sizes = ds.select(&te).unwrap().class_sizes();
            for (k, &size) in ds.class_sizes().iter().enumerate() {
                let expected = size as f64 * 0.25;
                assert!((te_sizes[k] as f64 - expected).abs() <= 1.0);
            }
        }
    }

    fn write(dir: &Path, name: &str, body: &str) {
        let mut f = fs::File::create(dir.join(name)).unwrap();
        f.write_all(body.as_bytes()).unwrap();
    }

    #[test]
    fn tu_duplicate_pairs_collapse() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "T_A.txt", "1, 2\n2, 1\n");
        write(dir.path(), "T_graph_indicator.txt", "1\n1\n");
        write(dir.path(), "T_graph_labels.txt", "1\n");
        let ds = load_tu_dataset(dir.path(), "T", EdgeWeightMode::Uniform).unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds.graphs[0].edges(), &[(1, 2, 1.0)]);
    }

    #[test]
    fn tu_renumbering_labels_and_weights() {
        let dir = tempfile::tempdir().unwrap();
        write(
            dir.path(),
            "T_A.txt",
            "1, 2\n2, 1\n3, 4\n4, 5\n5, 4\n4, 3\n",
        );
        write(dir.path(), "T_edge_labels.txt", "0\n0\n2\n1\n1\n2\n");
        write(dir.path(), "T_graph_indicator.txt", "1\n1\n2\n2\n2\n");
        write(dir.path(), "T_graph_labels.txt", "1\n-1\n");
        let ds = load_tu_dataset(dir.path(), "T", EdgeWeightMode::FromEdgeLabels).unwrap();
        assert_eq!(ds.labels, vec![1, 0]);
        assert_eq!(ds.class_count, 2);
        assert_eq!(ds.graphs[1].n_vertices(), 3);
        assert_eq!(ds.graphs[1].edges(), &[(1, 2, 3.0), (2, 3, 2.0)]);
        let ds = load_tu_dataset(dir.path(), "T", EdgeWeightMode::Uniform).unwrap();
        assert_eq!(ds.graphs[1].edges(), &[(1, 2, 1.0), (2, 3, 1.0)]);
    }

    #[test]
    fn tu_errors_carry_file_and_line() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "T_A.txt", "1, 2\n2, 3\n");
        write(dir.path(), "T_graph_indicator.txt", "1\n1\n2\n");
        write(dir.path(), "T_graph_labels.txt", "0\n1\n");
        match load_tu_dataset(dir.path(), "T", EdgeWeightMode::Uniform) {
            Err(Error::Parse { file, line, .. }) => {
                assert!(file.ends_with("T_A.txt"));
                assert_eq!(line, 2);
            }
            other => panic!("expected parse error, got {other:?}"),
        }

        write(dir.path(), "T_A.txt", "1, 9\n");
        assert!(matches!(
            load_tu_dataset(dir.path(), "T", EdgeWeightMode::Uniform),
            Err(Error::Parse { line: 1, .. })
        ));

        write(dir.path(), "T_A.txt", "1, 2\n");
        write(dir.path(), "T_graph_labels.txt", "0\n");
        assert!(matches!(
            load_tu_dataset(dir.path(), "T", EdgeWeightMode::Uniform),
            Err(Error::Parse { .. })
        ));

        assert!(matches!(
            load_tu_dataset(dir.path(), "MISSING", EdgeWeightMode::Uniform),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn relabel_is_checked() {
        let g = path3();
        assert_eq!(
            g.relabeled(&[3, 2, 1]).unwrap().edges(),
            &[(3, 2, 0.5), (2, 1, 1.5)]
        );
        assert!(g.relabeled(&[1, 1, 2]).is_err());
    }
}
