use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest team count covered by the table.
pub const MAX_TABLE_N: usize = 20;

/// One row of the maximum-order-statistic table for `n` iid standard Normals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxOrderStatsRow {
    pub n: usize,
    /// Expected maximum.
    pub mev: f64,
    /// Expected squared maximum.
    pub ex2: f64,
    /// Variance of the maximum.
    pub mvar: f64,
}

const fn row(n: usize, mev: f64, ex2: f64, mvar: f64) -> MaxOrderStatsRow {
    MaxOrderStatsRow { n, mev, ex2, mvar }
}

/// Expected value and second moment of the largest of `n` standard Normals,
/// transcribed from published tables, with the variance column derived from
/// them. Literal nine-decimal values; never recomputed.
const ROWS: [MaxOrderStatsRow; MAX_TABLE_N] = [
    row(1, 0.0, 1.0, 1.0),
    row(2, 0.564189584, 1.0, 0.681690114),
    row(3, 0.846284375, 1.275664448, 0.559467204),
    row(4, 1.029375373, 1.551328895, 0.491715237),
    row(5, 1.162964474, 1.800020436, 0.447534069),
    row(6, 1.267206361, 2.021739069, 0.415927109),
    row(7, 1.352178376, 2.220304137, 0.391917777),
    row(8, 1.423600306, 2.399534975, 0.372897143),
    row(9, 1.485013162, 2.562617418, 0.357353326),
    row(10, 1.538752731, 2.71210379, 0.344343823),
    row(11, 1.586436352, 2.850027741, 0.333247443),
    row(12, 1.62922764, 2.97801909, 0.323636387),
    row(13, 1.667990177, 3.097396615, 0.315205384),
    row(14, 1.703381554, 3.209238821, 0.307730102),
    row(15, 1.735913445, 3.314427059, 0.30103157),
    row(16, 1.766991393, 3.413735409, 0.291476826),
    row(17, 1.793941081, 3.507760835, 0.289536233),
    row(18, 1.820031879, 3.59704617, 0.28453013),
    row(19, 1.844481512, 3.682047852, 0.279935805),
    row(20, 1.86747506, 3.763159715, 0.275696616),
];

/// Read-only view over the static table.
#[derive(Debug, Clone, Copy, Default)]
pub struct MaxOrderStatsTable;

impl MaxOrderStatsTable {
    pub fn rows(&self) -> &'static [MaxOrderStatsRow] {
        &ROWS
    }

    pub fn get(&self, n: usize) -> Result<&'static MaxOrderStatsRow> {
        if n == 0 || n > MAX_TABLE_N {
            return Err(Error::UnsupportedLeagueSize(n));
        }
        Ok(&ROWS[n - 1])
    }
}

/// `(MEV(n), MVAR(n))`: mean and variance of the maximum of `n` iid standard
/// Normals, for `1 <= n <= 20`.
pub fn max_order_stats(n: usize) -> Result<(f64, f64)> {
    let r = MaxOrderStatsTable.get(n)?;
    Ok((r.mev, r.mvar))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_rows() {
        assert_eq!(max_order_stats(1).unwrap(), (0.0, 1.0));
        assert_eq!(max_order_stats(2).unwrap(), (0.564189584, 0.681690114));
        assert_eq!(max_order_stats(11).unwrap(), (1.586436352, 0.333247443));
        assert_eq!(max_order_stats(12).unwrap().1, 0.323636387);
        assert_eq!(max_order_stats(20).unwrap().0, 1.86747506);
    }

    #[test]
    fn first_row_is_exact() {
        let r = MaxOrderStatsTable.get(1).unwrap();
        assert_eq!((r.mev, r.ex2, r.mvar), (0.0, 1.0, 1.0));
    }

    #[test]
    fn out_of_range_is_rejected() {
        assert!(matches!(max_order_stats(0), Err(Error::UnsupportedLeagueSize(0))));
        assert!(matches!(
            max_order_stats(21),
            Err(Error::UnsupportedLeagueSize(21))
        ));
    }

    #[test]
    fn monotone_shape() {
        let rows = MaxOrderStatsTable.rows();
        for w in rows.windows(2) {
            assert!(w[1].mev > w[0].mev, "mev not increasing at n = {}", w[1].n);
            if w[0].n >= 2 {
                assert!(w[1].mvar <= w[0].mvar, "mvar increasing at n = {}", w[1].n);
            }
        }
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.n, i + 1);
        }
    }

    #[test]
    fn mev_of_two_is_one_over_sqrt_pi() {
        let exact = 1.0 / std::f64::consts::PI.sqrt();
        assert!((max_order_stats(2).unwrap().0 - exact).abs() < 5e-10);
    }
}
