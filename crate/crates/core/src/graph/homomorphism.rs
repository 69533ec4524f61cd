use super::{intersect_sorted, Graph};
use crate::error::{Error, Result};

/// Largest source graph accepted by the homomorphism search.
pub const MAX_HOMOMORPHISM_SOURCE: usize = 6;

pub fn homomorphism_exists(source: &Graph, target: &Graph) -> Result<bool> {
    find_homomorphism(source, target).map(|m| m.is_some())
}

/// An edge-preserving map `source → target`, as the image of each source vertex.
///
/// Backtracking over source vertices in descending-degree order; each
/// candidate image must be adjacent to the images of all earlier-placed
/// neighbours.
pub fn find_homomorphism(source: &Graph, target: &Graph) -> Result<Option<Vec<usize>>> {
    let n = source.n();
    if n > MAX_HOMOMORPHISM_SOURCE {
        return Err(Error::cap(
            "homomorphism source vertex count",
            MAX_HOMOMORPHISM_SOURCE as u64,
            n as u64,
        ));
    }
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    if target.n() == 0 {
        return Ok(None);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(source.degree(v)));
    let mut image = vec![usize::MAX; n];
    let all: Vec<usize> = (0..target.n()).collect();

    fn go(
        pos: usize,
        order: &[usize],
        source: &Graph,
        target: &Graph,
        all: &[usize],
        image: &mut [usize],
    ) -> bool {
        let Some(&v) = order.get(pos) else {
            return true;
        };
        let mut cand: Option<Vec<usize>> = None;
        for &w in source.neighbors(v) {
            if image[w] == usize::MAX {
                continue;
            }
            let nb = target.neighbors(image[w]);
            cand = Some(match cand {
                None => nb.to_vec(),
                Some(c) => intersect_sorted(&c, nb),
            });
        }
        let cand = cand.as_deref().unwrap_or(all);
        for &t in cand {
            image[v] = t;
            if go(pos + 1, order, source, target, all, image) {
                return true;
            }
        }
        image[v] = usize::MAX;
        false
    }

    Ok(go(0, &order, source, target, &all, &mut image).then_some(image))
}
