//! Disjoint-set forest used for corner classes and square connectivity.

/// Union-find with union by size and path halving.
#[derive(Clone, Debug)]
pub struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSet {
    pub fn new(len: usize) -> Self {
        Self {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; returns false if they were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    pub fn set_size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r]
    }

    /// Groups every element by set, ordered by each set's smallest member.
    pub fn groups(&mut self) -> Vec<Vec<usize>> {
        let mut slot = vec![usize::MAX; self.len()];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for x in 0..self.len() {
            let r = self.find(x);
            if slot[r] == usize::MAX {
                slot[r] = out.len();
                out.push(Vec::new());
            }
            out[slot[r]].push(x);
        }
        out
    }
}

/// Union-find without path compression whose unions can be undone in LIFO order.
///
/// Each set also tracks how many links were added inside it, so a set whose
/// link count equals its size is a closed cycle.
#[derive(Clone, Debug)]
pub struct RollbackSet {
    parent: Vec<usize>,
    size: Vec<usize>,
    links: Vec<usize>,
    components: usize,
    history: Vec<Undo>,
}

#[derive(Clone, Copy, Debug)]
enum Undo {
    Merged { child: usize, root: usize },
    Closed { root: usize },
}

impl RollbackSet {
    pub fn new(len: usize) -> Self {
        Self {
            parent: (0..len).collect(),
            size: vec![1; len],
            links: vec![0; len],
            components: len,
            history: Vec::new(),
        }
    }

    pub fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn size_of(&self, x: usize) -> usize {
        self.size[self.find(x)]
    }

    /// Number of links added inside the set containing `x`.
    pub fn links_of(&self, x: usize) -> usize {
        self.links[self.find(x)]
    }

    pub fn mark(&self) -> usize {
        self.history.len()
    }

    /// Adds a link between `a` and `b`, returning the root of the resulting set.
    pub fn link(&mut self, a: usize, b: usize) -> usize {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            self.links[ra] += 1;
            self.history.push(Undo::Closed { root: ra });
            return ra;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.links[ra] += self.links[rb] + 1;
        self.components -= 1;
        self.history.push(Undo::Merged { child: rb, root: ra });
        ra
    }

    pub fn rollback(&mut self, mark: usize) {
        while self.history.len() > mark {
            match self.history.pop().expect("history underflow") {
                Undo::Closed { root } => self.links[root] -= 1,
                Undo::Merged { child, root } => {
                    self.parent[child] = child;
                    self.size[root] -= self.size[child];
                    self.links[root] -= self.links[child] + 1;
                    self.components += 1;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups_are_ordered_by_smallest_member() {
        let mut d = DisjointSet::new(5);
        d.union(3, 1);
        d.union(4, 0);
        assert_eq!(d.groups(), vec![vec![0, 4], vec![1, 3], vec![2]]);
        assert_eq!(d.set_size(4), 2);
    }

    #[test]
    fn rollback_restores_state() {
        let mut r = RollbackSet::new(4);
        r.link(0, 1);
        let m = r.mark();
        r.link(1, 2);
        r.link(2, 0);
        assert_eq!(r.components(), 2);
        assert_eq!(r.size_of(0), 3);
        r.rollback(m);
        assert_eq!(r.components(), 3);
        assert_eq!(r.size_of(2), 1);
        assert_eq!(r.size_of(0), 2);
    }
}
