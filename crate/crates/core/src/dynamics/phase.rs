use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::Serialize;

use super::{format_state, FiniteDynamicalSystem, State};
use crate::error::Result;
use crate::ff::Field;

const UNSET: u32 = u32::MAX;

/// One connected component of the phase space: a limit cycle with the
/// transient trees feeding into it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    /// Cycle states in dynamical order, starting at the smallest state index.
    pub cycle: Vec<State>,
    pub cycle_length: usize,
    pub component_size: u64,
    pub max_transient_height: u64,
}

#[derive(Clone, Debug)]
pub struct PhaseSpace {
    field: Field,
    nvars: usize,
    successor: Vec<u64>,
    component_of: Vec<u32>,
    height: Vec<u32>,
    components: Vec<Component>,
}

impl PhaseSpace {
    pub fn total_states(&self) -> u64 {
        self.successor.len() as u64
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    /// Cycle lengths, one per component, ascending.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.components.iter().map(|c| c.cycle_length).collect();
        v.sort_unstable();
        v
    }

    pub fn max_transient_height(&self) -> u64 {
        self.components
            .iter()
            .map(|c| c.max_transient_height)
            .max()
            .unwrap_or(0)
    }

    pub fn successor(&self, index: u64) -> u64 {
        self.successor[index as usize]
    }

    pub fn component_of(&self, index: u64) -> usize {
        self.component_of[index as usize] as usize
    }

    /// Steps needed from the state at `index` to reach its limit cycle.
    pub fn transient_height(&self, index: u64) -> u64 {
        self.height[index as usize] as u64
    }

    fn decode(&self, index: u64) -> State {
        let q = self.field.order() as u64;
        let mut s = vec![0; self.nvars];
        let mut index = index;
        for x in s.iter_mut().rev() {
            *x = (index % q) as u32;
            index /= q;
        }
        s
    }

    /// Graphviz rendering; nodes are named by comma-joined field literals.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph phase_space {\n");
        for (v, &w) in self.successor.iter().enumerate() {
            let a = format_state(self.field, &self.decode(v as u64));
            let b = format_state(self.field, &self.decode(w));
            writeln!(s, "  \"{a}\" -> \"{b}\";").expect("write to String");
        }
        s.push_str("}\n");
        s
    }
}

/// Exhaustive functional-graph decomposition of `f`.
pub fn phase_space(fds: &FiniteDynamicalSystem, bound: u64) -> Result<PhaseSpace> {
    let succ = fds.successor_table(bound)?;
    Ok(decompose(fds.field(), fds.nvars(), succ))
}

fn decompose(field: Field, nvars: usize, succ: Vec<u64>) -> PhaseSpace {
    let total = succ.len();
    // 0 = unseen, 1 = on the current path, 2 = finished
    let mut mark = vec![0u8; total];
    let mut component_of = vec![UNSET; total];
    let mut on_cycle = vec![false; total];
    let mut cycles: Vec<Vec<u64>> = Vec::new();
    let mut path: Vec<u64> = Vec::new();

    for start in 0..total {
        if mark[start] != 0 {
            continue;
        }
        path.clear();
        let mut v = start as u64;
        while mark[v as usize] == 0 {
            mark[v as usize] = 1;
            path.push(v);
            v = succ[v as usize];
        }
        if mark[v as usize] == 1 {
            let from = path.iter().rposition(|&u| u == v).expect("v is on the path");
            let mut cycle = path[from..].to_vec();
            let min_pos = (0..cycle.len()).min_by_key(|&i| cycle[i]).expect("nonempty");
            cycle.rotate_left(min_pos);
            let id = cycles.len() as u32;
            for &u in &cycle {
                component_of[u as usize] = id;
                on_cycle[u as usize] = true;
            }
            cycles.push(cycle);
        }
        let id = component_of[v as usize];
        for &u in &path {
            mark[u as usize] = 2;
            component_of[u as usize] = id;
        }
    }

    // Reverse BFS from the cycles gives transient heights.
    let mut indeg_offsets = vec![0u32; total + 1];
    for (v, &w) in succ.iter().enumerate() {
        if !on_cycle[v] {
            indeg_offsets[w as usize + 1] += 1;
        }
    }
    for i in 0..total {
        indeg_offsets[i + 1] += indeg_offsets[i];
    }
    let mut fill = indeg_offsets.clone();
    let mut preds = vec![0u64; indeg_offsets[total] as usize];
    for (v, &w) in succ.iter().enumerate() {
        if !on_cycle[v] {
            preds[fill[w as usize] as usize] = v as u64;
            fill[w as usize] += 1;
        }
    }
    let mut height = vec![UNSET; total];
    let mut queue: VecDeque<u64> = VecDeque::new();
    for c in &cycles {
        for &u in c {
            height[u as usize] = 0;
            queue.push_back(u);
        }
    }
    while let Some(u) = queue.pop_front() {
        let (a, b) = (indeg_offsets[u as usize], indeg_offsets[u as usize + 1]);
        for &v in &preds[a as usize..b as usize] {
            if height[v as usize] == UNSET {
                height[v as usize] = height[u as usize] + 1;
                queue.push_back(v);
            }
        }
    }

    let mut sizes = vec![0u64; cycles.len()];
    let mut heights = vec![0u64; cycles.len()];
    for v in 0..total {
        let c = component_of[v] as usize;
        sizes[c] += 1;
        heights[c] = heights[c].max(height[v] as u64);
    }

    let mut ps = PhaseSpace {
        field,
        nvars,
        successor: succ,
        component_of,
        height,
        components: Vec::new(),
    };
    ps.components = cycles
        .iter()
        .enumerate()
        .map(|(i, c)| Component {
            cycle: c.iter().map(|&u| ps.decode(u)).collect(),
            cycle_length: c.len(),
            component_size: sizes[i],
            max_transient_height: heights[i],
        })
        .collect();
    ps
}
