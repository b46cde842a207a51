//! Knuth's Algorithm X on dancing links, iterative.
//!
//! Items are `0..items`; options are lists of items. The item with the fewest
//! remaining options is branched on first (lowest index on ties) and options
//! are tried in insertion order, so the search is fully deterministic.

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum CoverSearch {
    /// Indices of the chosen options, in the order they were chosen.
    Found(Vec<usize>),
    Exhausted,
    BudgetExceeded,
}

const ROOT: usize = 0;

pub(crate) struct Dlx {
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    /// Header node of the item a node belongs to (headers point to themselves).
    col: Vec<usize>,
    /// Option index of each node (unused for headers).
    row: Vec<usize>,
    size: Vec<usize>,
    options: usize,
}

impl Dlx {
    pub fn new(items: usize) -> Self {
        let n = items + 1;
        let mut dlx = Self {
            left: (0..n).map(|i| if i == 0 { items } else { i - 1 }).collect(),
            right: (0..n).map(|i| if i == items { 0 } else { i + 1 }).collect(),
            up: (0..n).collect(),
            down: (0..n).collect(),
            col: (0..n).collect(),
            row: vec![usize::MAX; n],
            size: vec![0; n],
            options: 0,
        };
        dlx.left[ROOT] = items;
        dlx
    }

    /// Appends an option; returns its index. `items` must be distinct.
    pub fn add_option(&mut self, items: &[usize]) -> usize {
        let id = self.options;
        self.options += 1;
        let first = self.left.len();
        for (k, &item) in items.iter().enumerate() {
            let header = item + 1;
            let x = self.left.len();
            let prev = if k == 0 { x } else { x - 1 };
            self.left.push(prev);
            self.right.push(first);
            if k > 0 {
                self.right[prev] = x;
            }
            self.left[first] = x;
            self.up.push(self.up[header]);
            self.down.push(header);
            let above = self.up[header];
            self.down[above] = x;
            self.up[header] = x;
            self.col.push(header);
            self.row.push(id);
            self.size.push(0);
            self.size[header] += 1;
        }
        id
    }

    fn cover(&mut self, c: usize) {
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = r;
        self.left[r] = l;
        let mut i = self.down[c];
        while i != c {
            let mut j = self.right[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = d;
                self.up[d] = u;
                self.size[self.col[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    fn uncover(&mut self, c: usize) {
        let mut i = self.up[c];
        while i != c {
            let mut j = self.left[i];
            while j != i {
                self.size[self.col[j]] += 1;
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = j;
                self.up[d] = j;
                j = self.left[j];
            }
            i = self.up[i];
        }
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = c;
        self.left[r] = c;
    }

    /// Removes `item` from the problem as if an option covering it had been
    /// chosen outside the search.
    pub fn cover_item(&mut self, item: usize) {
        self.cover(item + 1);
    }

    fn choose(&self) -> usize {
        let mut best = self.right[ROOT];
        let mut c = self.right[best];
        while c != ROOT {
            if self.size[c] < self.size[best] {
                best = c;
            }
            c = self.right[c];
        }
        best
    }

    fn cover_row_rest(&mut self, r: usize) {
        let mut j = self.right[r];
        while j != r {
            self.cover(self.col[j]);
            j = self.right[j];
        }
    }

    fn uncover_row_rest(&mut self, r: usize) {
        let mut j = self.left[r];
        while j != r {
            self.uncover(self.col[j]);
            j = self.left[j];
        }
    }

    /// Finds one exact cover of the remaining items.
    pub fn solve(&mut self, max_nodes: u64) -> CoverSearch {
        let mut stack: Vec<usize> = Vec::new();
        let mut nodes = 0u64;
        'search: loop {
            if self.right[ROOT] == ROOT {
                return CoverSearch::Found(stack.iter().map(|&x| self.row[x]).collect());
            }
            let c = self.choose();
            if self.size[c] > 0 {
                if nodes >= max_nodes {
                    return CoverSearch::BudgetExceeded;
                }
                nodes += 1;
                self.cover(c);
                let r = self.down[c];
                stack.push(r);
                self.cover_row_rest(r);
                continue 'search;
            }
            // dead end: try the next option of the most recent choice
            while let Some(r) = stack.pop() {
                self.uncover_row_rest(r);
                let c = self.col[r];
                let next = self.down[r];
                if next != c {
                    if nodes >= max_nodes {
                        return CoverSearch::BudgetExceeded;
                    }
                    nodes += 1;
                    stack.push(next);
                    self.cover_row_rest(next);
                    continue 'search;
                }
                self.uncover(c);
            }
            return CoverSearch::Exhausted;
        }
    }
}
