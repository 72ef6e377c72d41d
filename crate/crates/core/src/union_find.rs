use std::collections::HashMap;

use crate::face::Vertex;

/// Union-find over vertex labels where each class is named by its smallest label.
#[derive(Debug, Clone, Default)]
pub(crate) struct LabelUnion {
    parent: HashMap<Vertex, Vertex>,
}

impl LabelUnion {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn find(&mut self, v: Vertex) -> Vertex {
        let mut root = v;
        while let Some(&p) = self.parent.get(&root) {
            if p == root {
                break;
            }
            root = p;
        }
        let mut cur = v;
        while cur != root {
            let next = self.parent.get(&cur).copied().unwrap_or(root);
            self.parent.insert(cur, root);
            cur = next;
        }
        root
    }

    pub fn union(&mut self, a: Vertex, b: Vertex) -> Vertex {
        let (ra, rb) = (self.find(a), self.find(b));
        let (keep, drop) = if ra <= rb { (ra, rb) } else { (rb, ra) };
        if keep != drop {
            self.parent.insert(drop, keep);
        }
        keep
    }
}
