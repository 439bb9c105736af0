/// Optimum of the continuous 0-1 knapsack relaxation: items taken greedily by
/// profit density, the last one fractionally.
pub fn fractional_knapsack_bound(profits: &[f64], weights: &[u32], cap: u32) -> f64 {
    debug_assert_eq!(profits.len(), weights.len());
    let mut order: Vec<usize> = (0..profits.len()).filter(|&i| profits[i] > 0.0).collect();
    order.sort_by(|&a, &b| {
        let da = profits[a] / f64::from(weights[a]);
        let db = profits[b] / f64::from(weights[b]);
        db.total_cmp(&da)
    });
    let mut room = f64::from(cap);
    let mut value = 0.0;
    for i in order {
        if room <= 0.0 {
            break;
        }
        let w = f64::from(weights[i]);
        if w <= room {
            value += profits[i];
            room -= w;
        } else {
            value += profits[i] * room / w;
            room = 0.0;
        }
    }
    value
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(fractional_knapsack_bound(&[1.0, 1.0], &[4, 4], 4), 1.0);
        assert_eq!(fractional_knapsack_bound(&[3.0, 2.0], &[2, 2], 3), 4.0);
        assert_eq!(fractional_knapsack_bound(&[3.0, 2.0], &[2, 2], 0), 0.0);
        assert_eq!(fractional_knapsack_bound(&[], &[], 7), 0.0);
    }

    #[test]
    fn bounds_the_integer_optimum() {
        // best integer: 5 + 4 = 9 at weight 9
        let v = fractional_knapsack_bound(&[5.0, 4.0, 3.0], &[5, 4, 3], 10);
        assert!(v >= 9.0);
        assert!((v - 10.0).abs() < 1e-12);
    }
}
