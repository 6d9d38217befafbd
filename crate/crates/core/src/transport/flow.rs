//! Successive shortest paths with Johnson potentials on a small dense network.

const INF: i64 = i64::MAX / 4;

#[derive(Clone, Copy)]
struct Arc {
    to: usize,
    rev: usize,
    cap: i64,
    cost: i64,
}

pub(crate) struct MinCostFlow {
    graph: Vec<Vec<Arc>>,
}

impl MinCostFlow {
    pub(crate) fn new(n: usize) -> Self {
        MinCostFlow {
            graph: vec![Vec::new(); n],
        }
    }

    /// Adds an arc and returns its handle `(from, index)`.
    pub(crate) fn add_arc(&mut self, from: usize, to: usize, cap: i64, cost: i64) -> (usize, usize) {
        let fwd = self.graph[from].len();
        let bwd = self.graph[to].len() + usize::from(from == to);
        self.graph[from].push(Arc { to, rev: bwd, cap, cost });
        self.graph[to].push(Arc { to: from, rev: fwd, cap: 0, cost: -cost });
        (from, fwd)
    }

    /// Flow currently on the arc behind `handle`.
    pub(crate) fn flow(&self, handle: (usize, usize)) -> i64 {
        let arc = self.graph[handle.0][handle.1];
        self.graph[arc.to][arc.rev].cap
    }

    /// Pushes up to `limit` units from `s` to `t` at minimum cost.
    ///
    /// All initial arc costs must be non-negative. Returns `(flow, cost)`.
    pub(crate) fn run(&mut self, s: usize, t: usize, limit: i64) -> (i64, i128) {
        let n = self.graph.len();
        let mut potential = vec![0i64; n];
        let mut flow = 0i64;
        let mut cost = 0i128;
        while flow < limit {
            // Dense Dijkstra on reduced costs; the networks here have tens of nodes.
            let mut dist = vec![INF; n];
            let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
            let mut done = vec![false; n];
            dist[s] = 0;
            loop {
                let u = (0..n).filter(|&v| !done[v] && dist[v] < INF).min_by_key(|&v| dist[v]);
                let Some(u) = u else { break };
                done[u] = true;
                for (i, arc) in self.graph[u].iter().enumerate() {
                    if arc.cap == 0 {
                        continue;
                    }
                    let nd = dist[u] + arc.cost + potential[u] - potential[arc.to];
                    if nd < dist[arc.to] {
                        dist[arc.to] = nd;
                        prev[arc.to] = Some((u, i));
                    }
                }
            }
            if dist[t] >= INF {
                break;
            }
            for v in 0..n {
                if dist[v] < INF {
                    potential[v] += dist[v];
                }
            }
            let mut push = limit - flow;
            let mut v = t;
            while let Some((u, i)) = prev[v] {
                push = push.min(self.graph[u][i].cap);
                v = u;
            }
            let mut v = t;
            while let Some((u, i)) = prev[v] {
                let arc = self.graph[u][i];
                self.graph[u][i].cap -= push;
                self.graph[arc.to][arc.rev].cap += push;
                cost += i128::from(push) * i128::from(arc.cost);
                v = u;
            }
            flow += push;
        }
        (flow, cost)
    }
}
