use tfr_core::lattice::IntVector;

/// All integer points of `[-r, r]^d`, in lexicographic order.
pub fn box_points(d: usize, r: i64) -> Vec<IntVector> {
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-r..=r).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out.iter().map(|p| IntVector::from_i64(p)).collect()
}
