use crate::{distance, Error, Point};

/// Symmetric Hausdorff distance between two finite point sets.
pub fn hausdorff_distance(a: &[Point], b: &[Point]) -> Result<f64, Error> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(directed(a, b).max(directed(b, a)))
}

fn directed(from: &[Point], to: &[Point]) -> f64 {
    from.iter().map(|p| to.iter().map(|q| distance(p, q)).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    #[test]
    fn hand_cases() {
        let a = vec![vec![0.0, 0.0], vec![1.0, 0.0]];
        assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(hausdorff_distance(&[vec![0.0]], &[vec![3.0]]).unwrap(), 3.0);
        assert_eq!(hausdorff_distance(&a, &[vec![0.0, 1.0]]).unwrap(), core::f64::consts::SQRT_2);
        assert_eq!(hausdorff_distance(&a, &[]), Err(Error::EmptySet));
    }

    fn cloud() -> impl Strategy<Value = Vec<Point>> {
        prop::collection::vec(prop::collection::vec(-10.0..10.0f64, 2), 1..12)
    }

    proptest! {
        #[test]
        fn symmetric_and_triangle(a in cloud(), b in cloud(), c in cloud()) {
            let ab = hausdorff_distance(&a, &b).unwrap();
            let ba = hausdorff_distance(&b, &a).unwrap();
            let bc = hausdorff_distance(&b, &c).unwrap();
            let ac = hausdorff_distance(&a, &c).unwrap();
            prop_assert_eq!(ab, ba);
            prop_assert!(ac <= ab + bc + 1e-12);
        }
    }
}
