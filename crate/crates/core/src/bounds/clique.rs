//! Exact maximum-weight clique by branch and bound.
//!
//! Vertices are relabelled in degeneracy order; each search node colours its
//! candidate set greedily and bounds a branch by the sum of the heaviest
//! vertex of every colour class still available. Ties are broken by vertex
//! index, so results are deterministic.

#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
    weight: Vec<u64>,
}

impl Graph {
    pub fn new(weights: Vec<u64>) -> Self {
        let n = weights.len();
        let words = n.div_ceil(64).max(1);
        Self { n, words, adj: vec![0; n * words], weight: weights }
    }

    pub fn unweighted(n: usize) -> Self {
        Self::new(vec![1; n])
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        self.adj[u * self.words + v / 64] |= 1 << (v % 64);
        self.adj[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn weight(&self, v: usize) -> u64 {
        self.weight[v]
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Degeneracy order: repeatedly remove a minimum-degree vertex (lowest
    /// index on ties); the result lists vertices in reverse removal order.
    fn degeneracy_order(&self) -> Vec<usize> {
        let mut degree: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        let mut removed = vec![false; self.n];
        let mut order = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            let v = (0..self.n).filter(|&v| !removed[v]).min_by_key(|&v| (degree[v], v)).unwrap();
            removed[v] = true;
            order.push(v);
            for u in 0..self.n {
                if !removed[u] && self.has_edge(u, v) {
                    degree[u] -= 1;
                }
            }
        }
        order.reverse();
        order
    }

    /// Sum of per-class maximum weights over a greedy colouring of all
    /// vertices; an upper bound on the maximum clique weight.
    pub fn colouring_bound(&self) -> u64 {
        let mut all = vec![0u64; self.words];
        for v in 0..self.n {
            all[v / 64] |= 1 << (v % 64);
        }
        let (_, bounds) = colour_sort(self, &all);
        bounds.last().copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clique {
    pub vertices: Vec<usize>,
    pub weight: u64,
    pub nodes: u64,
    /// False when the node limit stopped the search before it finished.
    pub complete: bool,
}

fn first_bit(set: &[u64]) -> Option<usize> {
    set.iter().enumerate().find(|(_, &w)| w != 0).map(|(k, &w)| k * 64 + w.trailing_zeros() as usize)
}

fn clear_bit(set: &mut [u64], v: usize) {
    set[v / 64] &= !(1 << (v % 64));
}

/// Greedy colouring of the candidate bitset. Returns the vertices grouped by
/// colour class and, per position, the cumulative bound through that
/// vertex's class.
fn colour_sort(g: &Graph, cand: &[u64]) -> (Vec<usize>, Vec<u64>) {
    let mut uncoloured = cand.to_vec();
    let mut order = Vec::new();
    let mut bounds = Vec::new();
    let mut total = 0u64;
    let mut class = Vec::new();
    let mut q = vec![0u64; cand.len()];
    while uncoloured.iter().any(|&w| w != 0) {
        q.copy_from_slice(&uncoloured);
        class.clear();
        let mut heaviest = 0;
        while let Some(v) = first_bit(&q) {
            clear_bit(&mut q, v);
            clear_bit(&mut uncoloured, v);
            for (qw, aw) in q.iter_mut().zip(g.row(v)) {
                *qw &= !aw;
            }
            heaviest = heaviest.max(g.weight(v));
            class.push(v);
        }
        total += heaviest;
        for &v in &class {
            order.push(v);
            bounds.push(total);
        }
    }
    (order, bounds)
}

struct Search<'a> {
    g: &'a Graph,
    best: Vec<usize>,
    best_weight: u64,
    nodes: u64,
    limit: u64,
}

impl Search<'_> {
    fn expand(&mut self, clique: &mut Vec<usize>, weight: u64, mut cand: Vec<u64>) {
        self.nodes += 1;
        if self.nodes > self.limit {
            return;
        }
        if weight > self.best_weight {
            self.best_weight = weight;
            self.best = clique.clone();
        }
        let (order, bounds) = colour_sort(self.g, &cand);
        for idx in (0..order.len()).rev() {
            if self.nodes > self.limit || weight + bounds[idx] <= self.best_weight {
                return;
            }
            let v = order[idx];
            clear_bit(&mut cand, v);
            let next: Vec<u64> = cand.iter().zip(self.g.row(v)).map(|(c, a)| c & a).collect();
            clique.push(v);
            self.expand(clique, weight + self.g.weight(v), next);
            clique.pop();
        }
    }
}

/// Exact maximum-weight clique. Vertices of the result are sorted ascending.
pub fn max_weight_clique(g: &Graph) -> Clique {
    max_weight_clique_limited(g, u64::MAX)
}

/// As [`max_weight_clique`], giving up after `limit` search nodes; the
/// result then holds the best clique seen so far.
pub fn max_weight_clique_limited(g: &Graph, limit: u64) -> Clique {
    if g.is_empty() {
        return Clique { vertices: Vec::new(), weight: 0, nodes: 0, complete: true };
    }
    // search on a copy relabelled so that index order is degeneracy order
    let order = g.degeneracy_order();
    let mut h = Graph::new(order.iter().map(|&v| g.weight(v)).collect());
    for (i, &u) in order.iter().enumerate() {
        for (j, &v) in order.iter().enumerate().skip(i + 1) {
            if g.has_edge(u, v) {
                h.add_edge(i, j);
            }
        }
    }
    let identity: Vec<usize> = (0..h.len()).collect();
    let start = greedy_clique(&h, &identity);
    let mut search = Search {
        g: &h,
        best_weight: start.iter().map(|&v| h.weight(v)).sum(),
        best: start,
        nodes: 0,
        limit,
    };
    let mut all = vec![0u64; h.words];
    for v in 0..h.len() {
        all[v / 64] |= 1 << (v % 64);
    }
    search.expand(&mut Vec::new(), 0, all);
    let mut vertices: Vec<usize> = search.best.iter().map(|&i| order[i]).collect();
    vertices.sort_unstable();
    let complete = search.nodes <= limit;
    Clique { weight: search.best_weight, vertices, nodes: search.nodes, complete }
}

/// Maximum-weight clique among those containing `v`.
pub fn max_weight_clique_through(g: &Graph, v: usize, limit: u64) -> Clique {
    let nbrs: Vec<usize> = (0..g.len()).filter(|&u| g.has_edge(u, v)).collect();
    let mut sub = Graph::new(nbrs.iter().map(|&u| g.weight(u)).collect());
    for (i, &a) in nbrs.iter().enumerate() {
        for (j, &b) in nbrs.iter().enumerate().skip(i + 1) {
            if g.has_edge(a, b) {
                sub.add_edge(i, j);
            }
        }
    }
    let inner = max_weight_clique_limited(&sub, limit);
    let mut vertices: Vec<usize> = inner.vertices.iter().map(|&i| nbrs[i]).collect();
    vertices.push(v);
    vertices.sort_unstable();
    Clique { weight: inner.weight + g.weight(v), vertices, nodes: inner.nodes, complete: inner.complete }
}

/// Greedy clique scanning `order`.
pub fn greedy_clique(g: &Graph, order: &[usize]) -> Vec<usize> {
    let mut clique: Vec<usize> = Vec::new();
    for &v in order {
        if clique.iter().all(|&u| g.has_edge(u, v)) {
            clique.push(v);
        }
    }
    clique
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_force(g: &Graph) -> u64 {
        let n = g.len();
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            let vs: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            let ok = vs.iter().enumerate().all(|(i, &u)| vs[i + 1..].iter().all(|&v| g.has_edge(u, v)));
            if ok {
                best = best.max(vs.iter().map(|&v| g.weight(v)).sum());
            }
        }
        best
    }

    #[test]
    fn matches_brute_force_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..300 {
            let n = rng.gen_range(0..14);
            let p = rng.gen_range(0.1..0.9);
            let weights: Vec<u64> = (0..n).map(|_| if trial % 2 == 0 { 1 } else { rng.gen_range(1..4) }).collect();
            let mut g = Graph::new(weights);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        g.add_edge(u, v);
                    }
                }
            }
            let c = max_weight_clique(&g);
            assert_eq!(c.weight, brute_force(&g), "trial {trial}");
            assert_eq!(c.weight, c.vertices.iter().map(|&v| g.weight(v)).sum::<u64>());
            for (i, &u) in c.vertices.iter().enumerate() {
                for &v in &c.vertices[i + 1..] {
                    assert!(g.has_edge(u, v));
                }
            }
            assert!(g.colouring_bound() >= c.weight);
        }
    }

    #[test]
    fn complete_and_empty_graphs() {
        let mut k5 = Graph::unweighted(5);
        for u in 0..5 {
            for v in u + 1..5 {
                k5.add_edge(u, v);
            }
        }
        assert_eq!(max_weight_clique(&k5).vertices, vec![0, 1, 2, 3, 4]);
        let e = Graph::unweighted(4);
        assert_eq!(max_weight_clique(&e).weight, 1);
        assert_eq!(max_weight_clique(&Graph::unweighted(0)).weight, 0);
    }
}
