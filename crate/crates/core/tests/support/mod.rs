//! Shared test support: independent oracles and seeded random generators.
//!
//! The homology oracle here deliberately avoids the library's algorithm:
//! it presents the first homology of the m-fold cyclic branched cover from
//! the Seifert matrix of T(2,q) and reduces the presentation with an
//! integer Smith-normal-form elimination.

#![allow(dead_code)]

use knotgraph::abelian::FiniteAbelianGroup;
use knotgraph::metricgraph::MetricGraph;
use knotgraph::Rational;
use rand::Rng;

/// Seifert matrix of the (2, q) torus knot for odd q: (q-1)x(q-1), -1 on
/// the diagonal, +1 on the superdiagonal.
pub fn seifert_matrix_t2q(q: usize) -> Vec<Vec<i128>> {
    let s = q - 1;
    let mut v = vec![vec![0i128; s]; s];
    for i in 0..s {
        v[i][i] = -1;
        if i + 1 < s {
            v[i][i + 1] = 1;
        }
    }
    v
}

/// Presentation matrix of H_1 of the m-fold cyclic branched cover from a
/// Seifert matrix V: an (m-1)x(m-1) block tridiagonal matrix with V + V^T
/// on the diagonal, -V above, -V^T below.
pub fn cover_presentation(v: &[Vec<i128>], m: usize) -> Vec<Vec<i128>> {
    let s = v.len();
    let n = (m - 1) * s;
    let mut a = vec![vec![0i128; n]; n];
    for b in 0..m - 1 {
        for i in 0..s {
            for j in 0..s {
                a[b * s + i][b * s + j] = v[i][j] + v[j][i];
                if b + 1 < m - 1 {
                    a[b * s + i][(b + 1) * s + j] = -v[i][j];
                    a[(b + 1) * s + i][b * s + j] = -v[j][i];
                }
            }
        }
    }
    a
}

/// Cokernel of an integer matrix (relations acting on Z^rows) via Smith
/// elimination: repeatedly pick the smallest nonzero entry of the working
/// submatrix as pivot and clear its row and column.
pub fn cokernel(mut a: Vec<Vec<i128>>) -> FiniteAbelianGroup {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut orders: Vec<u64> = Vec::new();
    let mut pivots = 0usize;
    for t in 0..rows.min(cols) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j] != 0
                        && pivot.is_none_or(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                let free = rows - pivots;
                let torsion: Vec<u64> = orders.into_iter().filter(|&d| d > 1).collect();
                return FiniteAbelianGroup::from_parts(free, &torsion);
            };
            a.swap(t, pi);
            for row in &mut a {
                row.swap(t, pj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                let f = a[i][t] / a[t][t];
                if f != 0 {
                    for j in t..cols {
                        a[i][j] -= f * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let f = a[t][j] / a[t][t];
                if f != 0 {
                    for i in t..rows {
                        a[i][j] -= f * a[i][t];
                    }
                }
                if a[t][j] != 0 {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        orders.push(a[t][t].unsigned_abs() as u64);
        pivots += 1;
    }
    let free = rows - pivots;
    let torsion: Vec<u64> = orders.into_iter().filter(|&d| d > 1).collect();
    FiniteAbelianGroup::from_parts(free, &torsion)
}

/// H_1 of the m-fold cyclic branched cover of T(2,q), entirely through the
/// Seifert-matrix presentation.
pub fn snf_cover_homology(q: usize, m: usize) -> FiniteAbelianGroup {
    cokernel(cover_presentation(&seifert_matrix_t2q(q), m))
}

/// Smallest generating-set size of the finite abelian group with the given
/// cyclic factor orders, by exhaustive search over element subsets.
/// Intended for small groups (order up to a few hundred).
pub fn brute_force_min_generators(orders: &[u64]) -> usize {
    let radices: Vec<u64> = orders.to_vec();
    let total: u64 = radices.iter().product();
    let decode = |mut x: u64| -> Vec<u64> {
        radices
            .iter()
            .map(|&r| {
                let d = x % r;
                x /= r;
                d
            })
            .collect()
    };
    let encode = |e: &[u64]| -> u64 {
        let mut x = 0u64;
        for (i, &r) in radices.iter().enumerate().rev() {
            x = x * r + e[i];
        }
        x
    };
    let add = |a: u64, b: u64| -> u64 {
        let (ea, eb) = (decode(a), decode(b));
        let sum: Vec<u64> = ea
            .iter()
            .zip(&eb)
            .zip(&radices)
            .map(|((&x, &y), &r)| (x + y) % r)
            .collect();
        encode(&sum)
    };
    let generates = |gens: &[u64]| -> bool {
        let mut seen = vec![false; total as usize];
        seen[0] = true;
        let mut frontier = vec![0u64];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = add(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    frontier.push(y);
                }
            }
        }
        seen.iter().all(|&s| s)
    };
    if total == 1 {
        return 0;
    }
    let elements: Vec<u64> = (1..total).collect();
    for size in 1..=orders.len() {
        let mut stack: Vec<(usize, Vec<u64>)> = vec![(0, Vec::new())];
        while let Some((start, chosen)) = stack.pop() {
            if chosen.len() == size {
                if generates(&chosen) {
                    return size;
                }
                continue;
            }
            for (offset, &e) in elements[start..].iter().enumerate() {
                let mut next = chosen.clone();
                next.push(e);
                stack.push((start + offset + 1, next));
            }
        }
    }
    orders.len()
}

/// Random connected graph: a random tree plus random extra edges.
pub fn random_connected_graph<R: Rng>(rng: &mut R, max_vertices: usize) -> MetricGraph {
    let v = rng.gen_range(2..=max_vertices);
    let labels: Vec<String> = (0..v).map(|i| i.to_string()).collect();
    let mut edges: Vec<(usize, usize)> = (1..v).map(|i| (rng.gen_range(0..i), i)).collect();
    for _ in 0..rng.gen_range(0..v) {
        let a = rng.gen_range(0..v);
        let b = rng.gen_range(0..v);
        if a != b {
            edges.push((a.min(b), a.max(b)));
        }
    }
    let edge_refs: Vec<(&str, &str)> = edges
        .iter()
        .map(|&(a, b)| (labels[a].as_str(), labels[b].as_str()))
        .collect();
    MetricGraph::from_edges(&edge_refs)
}

/// Random tree on 2..=max_vertices vertices.
pub fn random_tree<R: Rng>(rng: &mut R, max_vertices: usize) -> MetricGraph {
    let v = rng.gen_range(2..=max_vertices);
    let labels: Vec<String> = (0..v).map(|i| i.to_string()).collect();
    let edges: Vec<(String, String)> = (1..v)
        .map(|i| (labels[rng.gen_range(0..i)].clone(), labels[i].clone()))
        .collect();
    let edge_refs: Vec<(&str, &str)> =
        edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    MetricGraph::from_edges(&edge_refs)
}

/// Four-point constant by direct enumeration of all vertex quadruples with
/// non-decreasing indices (repeats included; they contribute nothing).
pub fn naive_delta_four_point(g: &MetricGraph) -> Rational {
    let d = g.distances().expect("connected");
    let n = g.vertex_count();
    let mut best = 0i64;
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                for l in k..n {
                    let s1 = d[i][j] + d[k][l];
                    let s2 = d[i][k] + d[j][l];
                    let s3 = d[i][l] + d[j][k];
                    let top = s1.max(s2).max(s3);
                    let second = (s1 + s2 + s3) - top - s1.min(s2).min(s3);
                    best = best.max(top - second);
                }
            }
        }
    }
    Rational::new(best, 2)
}
