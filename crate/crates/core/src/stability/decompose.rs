use crate::lambda::OnePs;
use crate::poly::Polynomial;

/// Connected components of the variable co-occurrence graph of a form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// Blocks of 0-based variable indices, ordered by smallest member.
    pub blocks: Vec<Vec<usize>>,
    /// For a nontrivial split, weights `−(n−r)` on the first block (of size
    /// `r`) and `r` elsewhere; the gradient point has Hilbert-Mumford weight 0
    /// under it.
    pub boundary_one_ps: Option<OnePs>,
}

impl Decomposition {
    pub fn is_trivial(&self) -> bool {
        self.blocks.len() < 2
    }
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut root = i;
    while parent[root] != root {
        root = parent[root];
    }
    let mut cur = i;
    while parent[cur] != root {
        let next = parent[cur];
        parent[cur] = root;
        cur = next;
    }
    root
}

/// Splits the variables of `F` into blocks such that no monomial mixes two
/// blocks. Variables absent from `F` form singleton blocks.
pub fn disjoint_decomposition(f: &Polynomial) -> Decomposition {
    let n = f.n_vars();
    let mut parent: Vec<usize> = (0..n).collect();
    for e in f.support() {
        let mut present = e.as_slice().iter().enumerate().filter(|(_, &a)| a > 0).map(|(i, _)| i);
        if let Some(first) = present.next() {
            for other in present {
                let (a, b) = (find(&mut parent, first), find(&mut parent, other));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut block_of_root = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if block_of_root[r] == usize::MAX {
            block_of_root[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[block_of_root[r]].push(i);
    }
    let boundary_one_ps = (blocks.len() >= 2).then(|| {
        let r = blocks[0].len() as i64;
        let n = n as i64;
        let weights = (0..n as usize)
            .map(|i| if blocks[0].contains(&i) { -(n - r) } else { r })
            .collect();
        OnePs::new(weights).expect("weights sum to zero")
    });
    Decomposition { blocks, boundary_one_ps }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milnor::gradient_point;
    use crate::poly::parse_polynomial;

    fn p(text: &str, n: usize) -> Polynomial {
        parse_polynomial(text, Some(n)).unwrap()
    }

    #[test]
    fn decomposition_examples() {
        let d = disjoint_decomposition(&p("x^3+y^3", 2));
        assert_eq!(d.blocks, vec![vec![0], vec![1]]);
        assert_eq!(d.boundary_one_ps.unwrap().weights(), &[-1, 1]);

        let d = disjoint_decomposition(&p("x^2*y", 2));
        assert_eq!(d.blocks, vec![vec![0, 1]]);
        assert!(d.boundary_one_ps.is_none());

        let d = disjoint_decomposition(&p("x^3+y^2*z+z^3", 3));
        assert_eq!(d.blocks, vec![vec![0], vec![1, 2]]);
        assert_eq!(d.boundary_one_ps.unwrap().weights(), &[-2, 1, 1]);
    }

    #[test]
    fn boundary_one_ps_has_zero_gradient_weight() {
        for (text, n) in [("x^3+y^3", 2), ("x^3+y^2*z+z^3", 3), ("x^2*z + z^3 + y^3", 3), ("x^4+y^4+z^4+w^4", 4)] {
            let f = p(text, n);
            let d = disjoint_decomposition(&f);
            let lambda = d.boundary_one_ps.unwrap();
            let w = gradient_point(&f).unwrap();
            assert_eq!(w.hm_weight(&lambda).unwrap(), 0, "{text}");
            assert_eq!(w.hm_weight(&lambda.negated()).unwrap(), 0, "{text}");
        }
    }
}
