/// Disjoint sets over `0..n` with union by size and path halving.
#[derive(Debug, Clone, Default)]
pub(crate) struct Partition {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl Partition {
    pub fn push(&mut self) -> usize {
        let id = self.parent.len();
        self.parent.push(id);
        self.size.push(1);
        id
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    /// Representative without compressing paths.
    pub fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn find_mut(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; returns the new representative.
    pub fn union(&mut self, a: usize, b: usize) -> usize {
        let (ra, rb) = (self.find_mut(a), self.find_mut(b));
        if ra == rb {
            return ra;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        big
    }

    #[cfg(test)]
    pub fn same(&self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Members of `x`'s set in ascending order.
    pub fn members(&self, x: usize) -> Vec<usize> {
        let root = self.find(x);
        (0..self.len()).filter(|&i| self.find(i) == root).collect()
    }
}

/// Equal when both induce the same classes, whatever the tree shapes.
impl PartialEq for Partition {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.labels() == other.labels()
    }
}

impl Eq for Partition {}

impl Partition {
    /// Each index mapped to the smallest member of its class.
    fn labels(&self) -> Vec<usize> {
        let mut least = vec![usize::MAX; self.len()];
        for i in 0..self.len() {
            let r = self.find(i);
            least[r] = least[r].min(i);
        }
        (0..self.len()).map(|i| least[self.find(i)]).collect()
    }
}
