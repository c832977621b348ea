//! Finite unit-edge graphs as geodesic metric spaces: exact all-pairs
//! shortest paths, four-point hyperbolicity constants, thinness of explicit
//! geodesic triangles, vertex links, and quasi-isometry verification.
//!
//! All quantities are measured at vertices. The four-point delta is the
//! whole-graph hyperbolicity surrogate; the thin-triangle delta is only
//! evaluated on explicitly given triangles. The two constants differ by a
//! bounded multiplicative factor and are never converted implicitly.

use crate::{Error, Rational, Result};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

/// An immutable finite graph with unit-length edges. The shortest-path
/// metric is computed once on demand and cached; operations that need the
/// metric reject disconnected graphs.
#[derive(Debug, Default)]
pub struct MetricGraph {
    labels: Vec<String>,
    index: BTreeMap<String, usize>,
    adjacency: Vec<Vec<usize>>,
    /// Normalized (lo, hi) vertex pairs, sorted, deduplicated.
    edges: Vec<(usize, usize)>,
    distances: OnceLock<Option<Vec<Vec<i64>>>>,
}

impl MetricGraph {
    /// Builds a graph from explicit vertices plus edges; edge endpoints not
    /// listed among the vertices are added. Self-loops are dropped (the
    /// vertex metric ignores them).
    pub fn from_parts(vertices: &[&str], edges: &[(&str, &str)]) -> MetricGraph {
        let mut g = MetricGraph::default();
        for v in vertices {
            g.intern(v);
        }
        for (u, v) in edges {
            let (ui, vi) = (g.intern(u), g.intern(v));
            g.link(ui, vi);
        }
        g.finish();
        g
    }

    pub fn from_edges(edges: &[(&str, &str)]) -> MetricGraph {
        MetricGraph::from_parts(&[], edges)
    }

    /// Parses the line-oriented edge-list format: `u v` per line with
    /// whitespace-separated labels, `#` starting a comment line.
    pub fn parse(text: &str) -> Result<MetricGraph> {
        let mut g = MetricGraph::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::GraphParse {
                    line: lineno + 1,
                    message: format!("expected two labels, found {}", fields.len()),
                });
            }
            let (ui, vi) = (g.intern(fields[0]), g.intern(fields[1]));
            g.link(ui, vi);
        }
        g.finish();
        Ok(g)
    }

    /// Writes the edge-list format `parse` accepts.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for &(u, v) in &self.edges {
            out.push_str(&format!("{} {}\n", self.labels[u], self.labels[v]));
        }
        out
    }

    fn intern(&mut self, label: &str) -> usize {
        if let Some(&i) = self.index.get(label) {
            return i;
        }
        let i = self.labels.len();
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), i);
        self.adjacency.push(Vec::new());
        i
    }

    fn link(&mut self, u: usize, v: usize) {
        if u != v {
            self.edges.push((u.min(v), u.max(v)));
        }
    }

    fn finish(&mut self) {
        self.edges.sort_unstable();
        self.edges.dedup();
        for &(u, v) in &self.edges {
            self.adjacency[u].push(v);
            self.adjacency[v].push(u);
        }
        for adj in &mut self.adjacency {
            adj.sort_unstable();
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    fn bfs_row(&self, source: usize) -> Vec<i64> {
        let mut dist = vec![-1i64; self.vertex_count()];
        let mut queue = std::collections::VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if dist[v] < 0 {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// The exact distance matrix via breadth-first search from every source,
    /// computed once and cached. Errors on disconnected graphs.
    pub fn distances(&self) -> Result<&Vec<Vec<i64>>> {
        let cached = self.distances.get_or_init(|| {
            let matrix: Vec<Vec<i64>> =
                (0..self.vertex_count()).map(|s| self.bfs_row(s)).collect();
            if matrix.iter().flatten().any(|&d| d < 0) {
                None
            } else {
                Some(matrix)
            }
        });
        cached.as_ref().ok_or(Error::Disconnected)
    }

    pub fn distance(&self, u: &str, v: &str) -> Result<i64> {
        let (ui, vi) = (self.index_of(u)?, self.index_of(v)?);
        Ok(self.distances()?[ui][vi])
    }

    pub fn diameter(&self) -> Result<i64> {
        Ok(self
            .distances()?
            .iter()
            .flatten()
            .copied()
            .max()
            .unwrap_or(0))
    }

    /// The four-point hyperbolicity constant: the maximum over vertex
    /// quadruples of (largest pair-sum - second pair-sum)/2 among the three
    /// distance sums d(x,y)+d(z,w), d(x,z)+d(y,w), d(x,w)+d(y,z).
    pub fn delta_four_point(&self) -> Result<Rational> {
        let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
        self.delta_four_point_with_workers(workers)
    }

    /// Same quantity with an explicit worker count. The quadruple index
    /// space is striped over workers by first index; the combined maximum is
    /// identical for every worker count.
    pub fn delta_four_point_with_workers(&self, workers: usize) -> Result<Rational> {
        let d = self.distances()?;
        let n = self.vertex_count();
        let workers = workers.max(1);
        let scan_stripe = |stripe: usize| -> i64 {
            let mut best = 0i64;
            let mut i = stripe;
            while i < n {
                for j in (i + 1)..n {
                    for k in (j + 1)..n {
                        for l in (k + 1)..n {
                            let s1 = d[i][j] + d[k][l];
                            let s2 = d[i][k] + d[j][l];
                            let s3 = d[i][l] + d[j][k];
                            let top = s1.max(s2).max(s3);
                            let second = (s1 + s2 + s3) - top - s1.min(s2).min(s3);
                            best = best.max(top - second);
                        }
                    }
                }
                i += workers;
            }
            best
        };
        let max_diff = if workers == 1 {
            scan_stripe(0)
        } else {
            std::thread::scope(|scope| {
                let handles: Vec<_> = (0..workers)
                    .map(|w| scope.spawn(move || scan_stripe(w)))
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("scan worker panicked"))
                    .max()
                    .unwrap_or(0)
            })
        };
        Ok(Rational::new(max_diff, 2))
    }

    /// Induced subgraph on the unit sphere around `v` (its link), keeping
    /// the original labels. The result may be disconnected.
    pub fn link_of_vertex(&self, v: &str) -> Result<MetricGraph> {
        let vi = self.index_of(v)?;
        let sphere = &self.adjacency[vi];
        let labels: Vec<&str> = sphere.iter().map(|&i| self.label(i)).collect();
        let mut edges = Vec::new();
        for (a, &u) in sphere.iter().enumerate() {
            for &w in &sphere[a + 1..] {
                if self.has_edge(u, w) {
                    edges.push((self.label(u), self.label(w)));
                }
            }
        }
        Ok(MetricGraph::from_parts(&labels, &edges))
    }

    /// Diameter of the link in its own induced metric.
    pub fn link_diameter(&self, v: &str) -> Result<LinkDiameter> {
        let link = self.link_of_vertex(v)?;
        if link.vertex_count() <= 1 {
            return Ok(LinkDiameter::Finite(0));
        }
        match link.diameter() {
            Ok(d) => Ok(LinkDiameter::Finite(d)),
            Err(Error::Disconnected) => Ok(LinkDiameter::Disconnected),
            Err(e) => Err(e),
        }
    }
}

/// Diameter of a vertex link: finite, or infinite because the link is
/// disconnected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkDiameter {
    Finite(i64),
    Disconnected,
}

impl fmt::Display for LinkDiameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinkDiameter::Finite(d) => write!(f, "{d}"),
            LinkDiameter::Disconnected => write!(f, "disconnected"),
        }
    }
}

/// A walk in a graph: consecutive vertices are adjacent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexPath {
    vertices: Vec<usize>,
}

impl VertexPath {
    /// Builds a path from labels, checking adjacency at every step.
    pub fn new(g: &MetricGraph, labels: &[&str]) -> Result<VertexPath> {
        let vertices: Vec<usize> = labels
            .iter()
            .map(|l| g.index_of(l))
            .collect::<Result<_>>()?;
        for (step, pair) in vertices.windows(2).enumerate() {
            if !g.has_edge(pair[0], pair[1]) {
                return Err(Error::NotAPath(step));
            }
        }
        if vertices.is_empty() {
            return Err(Error::NotAPath(0));
        }
        Ok(VertexPath { vertices })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn first(&self) -> usize {
        *self.vertices.first().unwrap()
    }

    fn last(&self) -> usize {
        *self.vertices.last().unwrap()
    }
}

/// The least vertex-scale delta for which the given geodesic triangle is
/// delta-thin: the maximum over vertices x on each side of the distance
/// from x to the union of the other two sides.
///
/// The sides must close up into a triangle and each must be geodesic.
pub fn triangle_thinness(g: &MetricGraph, sides: &[VertexPath; 3]) -> Result<Rational> {
    for i in 0..3 {
        if sides[i].last() != sides[(i + 1) % 3].first() {
            return Err(Error::OpenTriangle);
        }
    }
    let d = g.distances()?;
    for (i, side) in sides.iter().enumerate() {
        let len = side.len() as i64;
        let geo = d[side.first()][side.last()];
        if len != geo {
            return Err(Error::NonGeodesicSide(i, len, geo));
        }
    }
    let mut delta = 0i64;
    for i in 0..3 {
        let others: Vec<usize> = sides[(i + 1) % 3]
            .vertices()
            .iter()
            .chain(sides[(i + 2) % 3].vertices())
            .copied()
            .collect();
        for &x in sides[i].vertices() {
            let nearest = others.iter().map(|&y| d[x][y]).min().unwrap();
            delta = delta.max(nearest);
        }
    }
    Ok(Rational::from_integer(delta))
}

/// The first failure found when checking a candidate quasi-isometry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QiViolation {
    /// d_y(f(x1), f(x2)) < d_x(x1, x2)/a - b.
    PairLower { x1: String, x2: String },
    /// d_y(f(x1), f(x2)) > a d_x(x1, x2) + b.
    PairUpper { x1: String, x2: String },
    /// No image point within C of y.
    Density { y: String },
}

impl fmt::Display for QiViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QiViolation::PairLower { x1, x2 } => {
                write!(f, "pair ({x1}, {x2}) violates the lower inequality")
            }
            QiViolation::PairUpper { x1, x2 } => {
                write!(f, "pair ({x1}, {x2}) violates the upper inequality")
            }
            QiViolation::Density { y } => write!(f, "vertex {y} is farther than C from the image"),
        }
    }
}

/// Checks that `f` is an (a, b) quasi-isometric embedding of `x` into `y`
/// with C-dense image: `d(x1,x2)/a - b <= d(f x1, f x2) <= a d(x1,x2) + b`
/// for all pairs, and every vertex of `y` within C of the image. Returns
/// the first violation, scanning pairs in vertex order.
pub fn verify_quasi_isometry(
    x: &MetricGraph,
    y: &MetricGraph,
    f: &BTreeMap<String, String>,
    a: Rational,
    b: Rational,
    c: Rational,
) -> Result<Option<QiViolation>> {
    let dx = x.distances()?;
    let dy = y.distances()?;
    let image: Vec<usize> = x
        .labels()
        .iter()
        .map(|l| {
            let target = f.get(l).ok_or_else(|| Error::UnknownVertex(l.clone()))?;
            y.index_of(target)
        })
        .collect::<Result<_>>()?;
    for i in 0..x.vertex_count() {
        for j in (i + 1)..x.vertex_count() {
            let dij = Rational::from_integer(dx[i][j]);
            let img = Rational::from_integer(dy[image[i]][image[j]]);
            if img < dij / a - b {
                return Ok(Some(QiViolation::PairLower {
                    x1: x.label(i).to_string(),
                    x2: x.label(j).to_string(),
                }));
            }
            if img > a * dij + b {
                return Ok(Some(QiViolation::PairUpper {
                    x1: x.label(i).to_string(),
                    x2: x.label(j).to_string(),
                }));
            }
        }
    }
    for yv in 0..y.vertex_count() {
        let near = image
            .iter()
            .map(|&iv| dy[yv][iv])
            .min()
            .map(Rational::from_integer);
        if near.is_none_or(|d| d > c) {
            return Ok(Some(QiViolation::Density {
                y: y.label(yv).to_string(),
            }));
        }
    }
    Ok(None)
}

/// Exhaustively checks whether the submetric on `labels` embeds
/// isometrically into the real line: place the first point at 0 and try
/// every sign pattern for the others.
pub fn embeds_in_line(g: &MetricGraph, labels: &[&str]) -> Result<bool> {
    let d = g.distances()?;
    let idx: Vec<usize> = labels.iter().map(|l| g.index_of(l)).collect::<Result<_>>()?;
    let n = idx.len();
    if n <= 1 {
        return Ok(true);
    }
    for signs in 0u32..(1 << (n - 1)) {
        let positions: Vec<i64> = (0..n)
            .map(|i| {
                if i == 0 {
                    0
                } else if signs & (1 << (i - 1)) != 0 {
                    -d[idx[0]][idx[i]]
                } else {
                    d[idx[0]][idx[i]]
                }
            })
            .collect();
        let consistent = (0..n).all(|i| {
            (i + 1..n).all(|j| (positions[i] - positions[j]).abs() == d[idx[i]][idx[j]])
        });
        if consistent {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph(n: usize) -> MetricGraph {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let edges: Vec<(String, String)> = (0..n - 1)
            .map(|i| (i.to_string(), (i + 1).to_string()))
            .collect();
        let edge_refs: Vec<(&str, &str)> =
            edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let label_refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
        MetricGraph::from_parts(&label_refs, &edge_refs)
    }

    fn cycle_graph(n: usize) -> MetricGraph {
        let edges: Vec<(String, String)> = (0..n)
            .map(|i| (i.to_string(), ((i + 1) % n).to_string()))
            .collect();
        let edge_refs: Vec<(&str, &str)> =
            edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        MetricGraph::from_edges(&edge_refs)
    }

    #[test]
    fn apsp_examples() {
        assert_eq!(path_graph(4).distance("0", "3").unwrap(), 3);
        assert_eq!(cycle_graph(4).distance("0", "2").unwrap(), 2);
        let disconnected = MetricGraph::from_edges(&[("a", "b"), ("c", "d")]);
        assert!(matches!(disconnected.distances(), Err(Error::Disconnected)));
    }

    #[test]
    fn apsp_metric_axioms() {
        for g in [path_graph(7), cycle_graph(6)] {
            let d = g.distances().unwrap();
            let n = g.vertex_count();
            for i in 0..n {
                assert_eq!(d[i][i], 0);
                for j in 0..n {
                    assert_eq!(d[i][j], d[j][i]);
                    for k in 0..n {
                        assert!(d[i][j] <= d[i][k] + d[k][j]);
                    }
                }
            }
        }
    }

    #[test]
    fn four_point_examples() {
        assert_eq!(path_graph(8).delta_four_point().unwrap(), Rational::new(0, 1));
        assert_eq!(cycle_graph(4).delta_four_point().unwrap(), Rational::new(1, 1));
        let single = MetricGraph::from_parts(&["v"], &[]);
        assert_eq!(single.delta_four_point().unwrap(), Rational::new(0, 1));
    }

    #[test]
    fn four_point_worker_counts_agree() {
        let g = cycle_graph(9);
        let base = g.delta_four_point_with_workers(1).unwrap();
        for w in [2, 4, 7] {
            assert_eq!(g.delta_four_point_with_workers(w).unwrap(), base);
        }
    }

    #[test]
    fn thinness_examples() {
        // Triangle in a tree (star): all sides through the center, delta 0.
        let g = MetricGraph::from_edges(&[("c", "a"), ("c", "b"), ("c", "d")]);
        let sides = [
            VertexPath::new(&g, &["a", "c", "b"]).unwrap(),
            VertexPath::new(&g, &["b", "c", "d"]).unwrap(),
            VertexPath::new(&g, &["d", "c", "a"]).unwrap(),
        ];
        assert_eq!(triangle_thinness(&g, &sides).unwrap(), Rational::new(0, 1));

        // Triangle covering a 6-cycle with sides of length 2.
        let g = cycle_graph(6);
        let sides = [
            VertexPath::new(&g, &["0", "1", "2"]).unwrap(),
            VertexPath::new(&g, &["2", "3", "4"]).unwrap(),
            VertexPath::new(&g, &["4", "5", "0"]).unwrap(),
        ];
        assert_eq!(triangle_thinness(&g, &sides).unwrap(), Rational::new(1, 1));

        // Relabeling the sides leaves thinness unchanged.
        let rotated = [sides[1].clone(), sides[2].clone(), sides[0].clone()];
        assert_eq!(triangle_thinness(&g, &rotated).unwrap(), Rational::new(1, 1));

        // A non-geodesic side is rejected.
        let bad = [
            VertexPath::new(&g, &["0", "1", "2", "3", "4"]).unwrap(),
            VertexPath::new(&g, &["4", "3", "2"]).unwrap(),
            VertexPath::new(&g, &["2", "1", "0"]).unwrap(),
        ];
        assert!(matches!(
            triangle_thinness(&g, &bad),
            Err(Error::NonGeodesicSide(0, 4, 2))
        ));
    }

    #[test]
    fn link_examples() {
        let star = MetricGraph::from_edges(&[("c", "a"), ("c", "b"), ("c", "d")]);
        assert_eq!(star.link_diameter("c").unwrap(), LinkDiameter::Disconnected);
        assert_eq!(star.link_diameter("a").unwrap(), LinkDiameter::Finite(0));

        let k4 = MetricGraph::from_edges(&[
            ("1", "2"),
            ("1", "3"),
            ("1", "4"),
            ("2", "3"),
            ("2", "4"),
            ("3", "4"),
        ]);
        let link = k4.link_of_vertex("1").unwrap();
        assert_eq!(link.vertex_count(), 3);
        assert_eq!(link.edge_count(), 3);
        assert_eq!(k4.link_diameter("1").unwrap(), LinkDiameter::Finite(1));
    }

    #[test]
    fn quasi_isometry_examples() {
        let p9 = path_graph(9);
        let identity: BTreeMap<String, String> = (0..9)
            .map(|i| (i.to_string(), i.to_string()))
            .collect();
        let one = Rational::from_integer(1);
        let zero = Rational::from_integer(0);
        assert_eq!(
            verify_quasi_isometry(&p9, &p9, &identity, one, zero, zero).unwrap(),
            None
        );

        let p5 = path_graph(5);
        let halve: BTreeMap<String, String> = (0..9)
            .map(|i| (i.to_string(), (i / 2).to_string()))
            .collect();
        let two = Rational::from_integer(2);
        assert_eq!(
            verify_quasi_isometry(&p9, &p5, &halve, two, one, one).unwrap(),
            None
        );

        let constant: BTreeMap<String, String> =
            (0..9).map(|i| (i.to_string(), "0".to_string())).collect();
        assert!(matches!(
            verify_quasi_isometry(&p9, &p9, &constant, one, zero, zero).unwrap(),
            Some(QiViolation::PairLower { .. })
        ));
    }

    #[test]
    fn file_format_round_trip() {
        let text = "# a comment\na b\nb c\n";
        let g = MetricGraph::parse(text).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.distance("a", "c").unwrap(), 2);
        let round = MetricGraph::parse(&g.to_text()).unwrap();
        assert_eq!(round.distance("a", "c").unwrap(), 2);
        assert!(matches!(
            MetricGraph::parse("a b c\n"),
            Err(Error::GraphParse { line: 1, .. })
        ));
    }

    #[test]
    fn line_embedding_check() {
        let p = path_graph(5);
        assert!(embeds_in_line(&p, &["0", "2", "4", "1"]).unwrap());
        let c = cycle_graph(4);
        assert!(!embeds_in_line(&c, &["0", "1", "2", "3"]).unwrap());
    }

    #[test]
    fn deleting_cycle_edge_restores_tree_delta() {
        let g = cycle_graph(5);
        assert!(g.delta_four_point().unwrap() > Rational::new(0, 1));
        let edges: Vec<(String, String)> = (0..4)
            .map(|i| (i.to_string(), (i + 1).to_string()))
            .collect();
        let edge_refs: Vec<(&str, &str)> =
            edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let broken = MetricGraph::from_edges(&edge_refs);
        assert_eq!(broken.delta_four_point().unwrap(), Rational::new(0, 1));
    }
}
