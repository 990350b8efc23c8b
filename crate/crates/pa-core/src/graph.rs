//! Small directed-graph helpers over dense node ids: Tarjan's SCC algorithm (iterative,
//! so deep tau chains do not overflow the stack), terminal components and weak components.

/// Strongly connected components in reverse topological order of the condensation
/// (a component is emitted only after every component it can reach).
pub fn tarjan_scc(n: usize, succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;
    // Call stack frames: (node, position in its successor list).
    let mut frames: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        frames.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = frames.last_mut() {
            if let Some(&w) = succ[v].get(*pos) {
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            frames.pop();
            if let Some(&(parent, _)) = frames.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                out.push(comp);
            }
        }
    }
    out
}

/// Component id per node, following the numbering of `sccs`.
pub fn component_index(n: usize, sccs: &[Vec<usize>]) -> Vec<usize> {
    let mut comp = vec![0; n];
    for (i, c) in sccs.iter().enumerate() {
        for &v in c {
            comp[v] = i;
        }
    }
    comp
}

/// Indices (into `sccs`) of the terminal components: those without edges leaving them.
pub fn terminal_sccs(n: usize, succ: &[Vec<usize>], sccs: &[Vec<usize>]) -> Vec<usize> {
    let comp = component_index(n, sccs);
    (0..sccs.len())
        .filter(|&i| sccs[i].iter().all(|&v| succ[v].iter().all(|&w| comp[w] == i)))
        .collect()
}

/// Weakly connected components, each sorted, listed by smallest member.
pub fn weak_components(n: usize, succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for (v, out) in succ.iter().enumerate() {
        for &w in out {
            let (a, b) = (find(&mut parent, v), find(&mut parent, w));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for v in 0..n {
        let root = find(&mut parent, v);
        groups.entry(root).or_default().push(v);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort_by_key(|c| c[0]);
    out
}

/// Nodes reachable from `start` (including it), in BFS order.
pub fn reachable(start: usize, succ: &[Vec<usize>]) -> Vec<usize> {
    let mut seen = vec![false; succ.len()];
    let mut order = vec![start];
    seen[start] = true;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &w in &succ[v] {
            if !seen[w] {
                seen[w] = true;
                order.push(w);
            }
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sccs_of_a_cycle_with_tail() {
        // 0 -> 1 -> 2 -> 1, 3 isolated
        let succ = vec![vec![1], vec![2], vec![1], vec![]];
        let sccs = tarjan_scc(4, &succ);
        assert!(sccs.contains(&vec![1, 2]));
        assert!(sccs.contains(&vec![0]));
        let terminal: Vec<_> = terminal_sccs(4, &succ, &sccs).into_iter().map(|i| sccs[i].clone()).collect();
        assert_eq!(terminal.len(), 2);
        assert!(terminal.contains(&vec![1, 2]) && terminal.contains(&vec![3]));
        assert_eq!(weak_components(4, &succ), vec![vec![0, 1, 2], vec![3]]);
    }

    #[test]
    fn long_chain_does_not_recurse() {
        let n = 200_000;
        let succ: Vec<Vec<usize>> = (0..n).map(|i| if i + 1 < n { vec![i + 1] } else { vec![] }).collect();
        assert_eq!(tarjan_scc(n, &succ).len(), n);
    }
}
