//! Highest-label push-relabel on the split network.
//!
//! Phase one stops once no node below height `2n + 2` holds excess; at that
//! point the excess at the sink is the max-flow value. Phase two, needed
//! only for the min cut, returns the leftover excess to the source.

use super::{FlowNetwork, MaxFlow, SINK, SOURCE};

/// Push-relabel scratch space, reusable across networks.
#[derive(Debug, Default, Clone)]
pub struct PushRelabel {
    residual: Vec<u32>,
    excess: Vec<u32>,
    height: Vec<usize>,
    current: Vec<usize>,
    active: Vec<Vec<usize>>,
    // doubly linked lists of the nodes at each height below `nodes`
    level_head: Vec<usize>,
    level_next: Vec<usize>,
    level_prev: Vec<usize>,
    level_count: Vec<usize>,
    queue: Vec<usize>,
}

const NIL: usize = usize::MAX;

impl PushRelabel {
    /// Phase one: a maximum preflow. Returns the flow value reaching `t`.
    pub fn preflow(&mut self, net: &FlowNetwork) -> usize {
        let nodes = net.node_count();
        self.reset(net);
        self.initial_heights(net);

        for a in net.arc_range(SOURCE) {
            let cap = self.residual[a];
            if cap == 0 {
                continue;
            }
            let w = net.head[a] as usize;
            self.residual[a] = 0;
            self.residual[net.rev[a] as usize] += cap;
            self.excess[w] += cap;
            if w != SINK && self.height[w] < nodes && self.excess[w] == cap {
                self.active[self.height[w]].push(w);
            }
        }

        let mut highest = nodes.saturating_sub(1);
        loop {
            let Some(v) = self.active[highest].pop() else {
                if highest == 0 {
                    break;
                }
                highest -= 1;
                continue;
            };
            if self.height[v] != highest || self.excess[v] == 0 {
                continue;
            }
            if let Some(h) = self.discharge(net, v) {
                highest = highest.max(h);
            }
        }
        self.excess[SINK] as usize
    }

    /// Pushes and relabels at `v` until its excess is gone or it leaves the
    /// active range. Returns the highest bucket touched.
    fn discharge(&mut self, net: &FlowNetwork, v: usize) -> Option<usize> {
        let nodes = net.node_count();
        let end = net.first[v + 1] as usize;
        let mut touched = None;
        while self.excess[v] > 0 {
            if self.current[v] == end {
                if !self.relabel(net, v) {
                    return touched;
                }
                continue;
            }
            let a = self.current[v];
            let w = net.head[a] as usize;
            if self.residual[a] > 0 && self.height[v] == self.height[w] + 1 {
                let delta = self.excess[v].min(self.residual[a]);
                self.residual[a] -= delta;
                self.residual[net.rev[a] as usize] += delta;
                self.excess[v] -= delta;
                let was_idle = self.excess[w] == 0;
                self.excess[w] += delta;
                if was_idle && w != SINK && w != SOURCE && self.height[w] < nodes {
                    self.active[self.height[w]].push(w);
                    touched =
                        Some(touched.map_or(self.height[w], |t: usize| t.max(self.height[w])));
                }
            } else {
                self.current[v] += 1;
            }
        }
        touched
    }

    /// Relabels `v`, applying the gap rule. Returns false once `v` can no
    /// longer reach the sink (height lifted to the node count).
    fn relabel(&mut self, net: &FlowNetwork, v: usize) -> bool {
        let nodes = net.node_count();
        let old = self.height[v];
        if self.level_count[old] == 1 {
            // v is alone on its level: everything at or above it is cut off
            for h in old..nodes {
                let mut u = self.level_head[h];
                while u != NIL {
                    let next = self.level_next[u];
                    self.height[u] = nodes;
                    u = next;
                }
                self.level_head[h] = NIL;
                self.level_count[h] = 0;
            }
            return false;
        }
        let mut lowest = nodes;
        for a in net.arc_range(v) {
            if self.residual[a] > 0 {
                lowest = lowest.min(self.height[net.head[a] as usize] + 1);
            }
        }
        self.unlink(v);
        self.height[v] = lowest;
        self.current[v] = net.first[v] as usize;
        if lowest >= nodes {
            return false;
        }
        self.link(v);
        true
    }

    fn link(&mut self, v: usize) {
        let h = self.height[v];
        self.level_prev[v] = NIL;
        self.level_next[v] = self.level_head[h];
        if self.level_head[h] != NIL {
            self.level_prev[self.level_head[h]] = v;
        }
        self.level_head[h] = v;
        self.level_count[h] += 1;
    }

    fn unlink(&mut self, v: usize) {
        let h = self.height[v];
        let (prev, next) = (self.level_prev[v], self.level_next[v]);
        if prev == NIL {
            self.level_head[h] = next;
        } else {
            self.level_next[prev] = next;
        }
        if next != NIL {
            self.level_prev[next] = prev;
        }
        self.level_count[h] -= 1;
    }

    fn reset(&mut self, net: &FlowNetwork) {
        let nodes = net.node_count();
        self.residual.clear();
        self.residual.extend_from_slice(&net.capacity);
        self.excess.clear();
        self.excess.resize(nodes, 0);
        self.height.clear();
        self.height.resize(nodes, nodes);
        self.current.clear();
        self.current
            .extend(net.first[..nodes].iter().map(|&f| f as usize));
        if self.active.len() < nodes {
            self.active.resize_with(nodes, Vec::new);
        }
        for bucket in &mut self.active {
            bucket.clear();
        }
        self.level_head.clear();
        self.level_head.resize(nodes, NIL);
        self.level_next.clear();
        self.level_next.resize(nodes, NIL);
        self.level_prev.clear();
        self.level_prev.resize(nodes, NIL);
        self.level_count.clear();
        self.level_count.resize(nodes, 0);
    }

    /// Exact distances to the sink by reverse breadth-first search.
    fn initial_heights(&mut self, net: &FlowNetwork) {
        let nodes = net.node_count();
        self.queue.clear();
        self.height[SINK] = 0;
        self.queue.push(SINK);
        let mut i = 0;
        while i < self.queue.len() {
            let v = self.queue[i];
            i += 1;
            for a in net.arc_range(v) {
                let w = net.head[a] as usize;
                if w != SOURCE && self.height[w] == nodes && self.residual[net.rev[a] as usize] > 0
                {
                    self.height[w] = self.height[v] + 1;
                    self.queue.push(w);
                }
            }
        }
        self.height[SOURCE] = nodes;
        for idx in 0..self.queue.len() {
            let v = self.queue[idx];
            self.link(v);
        }
    }

    /// Phase two for the split network: cancels leftover excess by walking
    /// back along flow-carrying arcs, in-copies first, then out-copies. The
    /// network is layered (`s`, out-copies, in-copies, `t`), so one sweep in
    /// reverse layer order suffices.
    fn return_excess(&mut self, net: &FlowNetwork) {
        let n = net.graph_nodes;
        let layers = [2 + n..2 + 2 * n, 2..2 + n];
        for layer in layers {
            for v in layer {
                if self.excess[v] == 0 {
                    continue;
                }
                for a in net.arc_range(v) {
                    if net.capacity[a] != 0 {
                        continue;
                    }
                    // reverse arc: its residual is the flow on the arc into v
                    let flow = self.residual[a];
                    if flow == 0 {
                        continue;
                    }
                    let delta = flow.min(self.excess[v]);
                    self.residual[a] -= delta;
                    self.residual[net.rev[a] as usize] += delta;
                    self.excess[v] -= delta;
                    self.excess[net.head[a] as usize] += delta;
                    if self.excess[v] == 0 {
                        break;
                    }
                }
                debug_assert_eq!(self.excess[v], 0);
            }
        }
    }

    /// Nodes reachable from `s` through arcs with positive residual capacity.
    fn residual_reachable(&mut self, net: &FlowNetwork) -> Vec<bool> {
        let mut seen = vec![false; net.node_count()];
        seen[SOURCE] = true;
        self.queue.clear();
        self.queue.push(SOURCE);
        let mut i = 0;
        while i < self.queue.len() {
            let v = self.queue[i];
            i += 1;
            for a in net.arc_range(v) {
                let w = net.head[a] as usize;
                if self.residual[a] > 0 && !seen[w] {
                    seen[w] = true;
                    self.queue.push(w);
                }
            }
        }
        seen
    }

    /// Both phases followed by the residual search from `s`.
    pub fn max_flow(&mut self, net: &FlowNetwork) -> MaxFlow {
        let value = self.preflow(net);
        self.return_excess(net);
        debug_assert_eq!(self.excess[SINK] as usize, value);
        MaxFlow {
            value,
            reachable: self.residual_reachable(net),
        }
    }
}
