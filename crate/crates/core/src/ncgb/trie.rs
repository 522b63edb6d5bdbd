use crate::poly::{Letter, Word};

const NONE: u32 = u32::MAX;

/// Prefix tree over leading words; each terminal carries a basis id.
#[derive(Debug, Clone)]
pub(crate) struct Trie {
    alphabet: usize,
    children: Vec<u32>,
    terminal: Vec<u32>,
}

impl Trie {
    pub(crate) fn new(alphabet: usize) -> Self {
        Trie { alphabet, children: vec![NONE; alphabet], terminal: vec![NONE] }
    }

    fn child(&self, node: usize, l: Letter) -> Option<usize> {
        let c = self.children[node * self.alphabet + l as usize];
        (c != NONE).then_some(c as usize)
    }

    pub(crate) fn insert(&mut self, w: &Word, id: usize) {
        let mut node = 0;
        for &l in w.letters() {
            node = match self.child(node, l) {
                Some(c) => c,
                None => {
                    let fresh = self.terminal.len();
                    self.terminal.push(NONE);
                    self.children.extend(std::iter::repeat_n(NONE, self.alphabet));
                    self.children[node * self.alphabet + l as usize] = fresh as u32;
                    fresh
                }
            };
        }
        self.terminal[node] = id as u32;
    }

    pub(crate) fn remove(&mut self, w: &Word) {
        let mut node = 0;
        for &l in w.letters() {
            match self.child(node, l) {
                Some(c) => node = c,
                None => return,
            }
        }
        self.terminal[node] = NONE;
    }

    /// Leftmost occurrence of a stored word inside `w`: `(id, start)`.
    pub(crate) fn find_in(&self, w: &[Letter]) -> Option<(usize, usize)> {
        for start in 0..w.len() {
            let mut node = 0;
            for &l in &w[start..] {
                match self.child(node, l) {
                    Some(c) => node = c,
                    None => break,
                }
                if self.terminal[node] != NONE {
                    return Some((self.terminal[node] as usize, start));
                }
            }
        }
        None
    }
}

/// Number of words of each length `0..=d` containing none of `patterns` as a factor.
#[allow(clippy::needless_range_loop)]
pub(crate) fn count_avoiding(alphabet: usize, patterns: &[&[Letter]], d: usize) -> Vec<u128> {
    // Aho–Corasick automaton
    let mut goto: Vec<Vec<usize>> = vec![vec![usize::MAX; alphabet]];
    let mut bad = vec![false];
    for p in patterns {
        let mut node = 0;
        for &l in *p {
            let l = l as usize;
            if goto[node][l] == usize::MAX {
                goto.push(vec![usize::MAX; alphabet]);
                bad.push(false);
                goto[node][l] = goto.len() - 1;
            }
            node = goto[node][l];
        }
        bad[node] = true;
    }
    let mut fail = vec![0usize; goto.len()];
    let mut queue = std::collections::VecDeque::new();
    for l in 0..alphabet {
        match goto[0][l] {
            usize::MAX => goto[0][l] = 0,
            c => queue.push_back(c),
        }
    }
    while let Some(u) = queue.pop_front() {
        bad[u] = bad[u] || bad[fail[u]];
        for l in 0..alphabet {
            let v = goto[u][l];
            if v == usize::MAX {
                goto[u][l] = goto[fail[u]][l];
            } else {
                fail[v] = goto[fail[u]][l];
                queue.push_back(v);
            }
        }
    }
    let mut counts = vec![0u128; goto.len()];
    counts[0] = 1;
    let mut out = Vec::with_capacity(d + 1);
    out.push(1);
    for _ in 0..d {
        let mut next = vec![0u128; goto.len()];
        for (s, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for l in 0..alphabet {
                let t = goto[s][l];
                if !bad[t] {
                    next[t] = next[t].saturating_add(c);
                }
            }
        }
        counts = next;
        out.push(counts.iter().fold(0u128, |a, &b| a.saturating_add(b)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_leftmost() {
        let mut t = Trie::new(3);
        t.insert(&Word::from_letters(&[1, 2]), 7);
        t.insert(&Word::from_letters(&[0]), 3);
        assert_eq!(t.find_in(&[2, 1, 2, 0]), Some((7, 1)));
        t.remove(&Word::from_letters(&[1, 2]));
        assert_eq!(t.find_in(&[2, 1, 2, 0]), Some((3, 3)));
        assert_eq!(t.find_in(&[2, 2]), None);
    }

    #[test]
    fn avoiding_counts() {
        assert_eq!(count_avoiding(2, &[], 3), vec![1, 2, 4, 8]);
        assert_eq!(count_avoiding(1, &[&[0, 0]], 3), vec![1, 1, 0, 0]);
        // commutative monomials in 3 letters: avoid ba, ca, cb
        assert_eq!(count_avoiding(3, &[&[1, 0], &[2, 0], &[2, 1]], 4), vec![1, 3, 6, 10, 15]);
    }
}
