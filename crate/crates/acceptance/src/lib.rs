//! Reference data for the acceptance suite: tabulated symmetric dual
//! matrices and their closed forms in `k`, transcribed independently of the
//! library code.

use dualbern::ratmat::Mat;

/// Closed forms of the symmetric dual matrices for m = 2..5 (common
/// denominator first, rows as polynomials in k).
pub fn closed_form(m: usize, k: i64) -> Mat {
    let k2 = k * k;
    let k3 = k2 * k;
    let k4 = k3 * k;
    let q = |c: i64| c * k - 1;
    let km = k - 1;
    match m {
        2 => Mat::from_scaled_rows(
            2 * k,
            &[&[2 * k, 0, 0], &[-km, 2 * q(2), -km], &[0, 0, 2 * k]],
        ),
        3 => {
            let r1 = [
                -2 * km * q(5),
                6 * q(2) * q(3),
                -6 * km * q(3),
                2 * km * q(2),
            ];
            let mut r2 = r1;
            r2.reverse();
            Mat::from_scaled_rows(
                12 * k2,
                &[&[12 * k2, 0, 0, 0], &r1, &r2, &[0, 0, 0, 12 * k2]],
            )
        }
        4 => {
            let r1 = [
                -3 * km * (26 * k2 - 9 * k + 1),
                12 * q(2) * q(3) * q(4),
                -18 * km * q(3) * q(4),
                12 * km * q(2) * q(4),
                -3 * km * q(2) * q(3),
            ];
            let r2 = [
                4 * km * (13 * k2 - 12 * k + 2),
                -32 * km * q(2) * q(4),
                24 * q(4) * (5 * k2 - 6 * k + 2),
                -32 * km * q(2) * q(4),
                4 * km * (13 * k2 - 12 * k + 2),
            ];
            let mut r3 = r1;
            r3.reverse();
            let d = 72 * k3;
            Mat::from_scaled_rows(d, &[&[d, 0, 0, 0, 0], &r1, &r2, &r3, &[0, 0, 0, 0, d]])
        }
        5 => {
            let r1 = [
                -4 * km * q(7) * (22 * k2 - 7 * k + 1),
                20 * q(2) * q(3) * q(4) * q(5),
                -40 * km * q(3) * q(4) * q(5),
                40 * km * q(2) * q(4) * q(5),
                -20 * km * q(2) * q(3) * q(5),
                4 * km * q(2) * q(3) * q(4),
            ];
            let r2 = [
                2 * km * (269 * k3 - 331 * k2 + 109 * k - 11),
                -10 * km * q(2) * q(5) * (29 * k - 11),
                20 * q(5) * (59 * k3 - 101 * k2 + 59 * k - 11),
                -20 * km * q(2) * q(5) * (23 * k - 11),
                10 * km * q(5) * (37 * k2 - 42 * k + 11),
                -2 * km * q(2) * (77 * k2 - 72 * k + 11),
            ];
            let mut r3 = r2;
            r3.reverse();
            let mut r4 = r1;
            r4.reverse();
            let d = 480 * k4;
            Mat::from_scaled_rows(
                d,
                &[&[d, 0, 0, 0, 0, 0], &r1, &r2, &r3, &r4, &[0, 0, 0, 0, 0, d]],
            )
        }
        _ => unreachable!(),
    }
}

/// Reference tables keyed by (m, k). The m = 4, k = 3 table has 664 as the
/// last entry of its middle row (a row ending in 644 is not row-affine), and
/// the two m = 5 tables have denominators 480 k^4 for k = 3 and k = 4.
pub fn golden_tables() -> Vec<(usize, usize, Mat)> {
    vec![
        (
            2,
            2,
            Mat::from_scaled_rows(4, &[&[4, 0, 0], &[-1, 6, -1], &[0, 0, 4]]),
        ),
        (
            2,
            3,
            Mat::from_scaled_rows(6, &[&[6, 0, 0], &[-2, 10, -2], &[0, 0, 6]]),
        ),
        (
            2,
            4,
            Mat::from_scaled_rows(8, &[&[8, 0, 0], &[-3, 14, -3], &[0, 0, 8]]),
        ),
        (
            2,
            5,
            Mat::from_scaled_rows(10, &[&[10, 0, 0], &[-4, 18, -4], &[0, 0, 10]]),
        ),
        (
            3,
            2,
            Mat::from_scaled_rows(
                48,
                &[
                    &[48, 0, 0, 0],
                    &[-18, 90, -30, 6],
                    &[6, -30, 90, -18],
                    &[0, 0, 0, 48],
                ],
            ),
        ),
        (
            3,
            3,
            Mat::from_scaled_rows(
                108,
                &[
                    &[108, 0, 0, 0],
                    &[-56, 240, -96, 20],
                    &[20, -96, 240, -56],
                    &[0, 0, 0, 108],
                ],
            ),
        ),
        (
            3,
            4,
            Mat::from_scaled_rows(
                192,
                &[
                    &[192, 0, 0, 0],
                    &[-114, 462, -198, 42],
                    &[42, -198, 462, -114],
                    &[0, 0, 0, 192],
                ],
            ),
        ),
        (
            3,
            5,
            Mat::from_scaled_rows(
                300,
                &[
                    &[300, 0, 0, 0],
                    &[-192, 756, -336, 72],
                    &[72, -336, 756, -192],
                    &[0, 0, 0, 300],
                ],
            ),
        ),
        (
            4,
            2,
            Mat::from_scaled_rows(
                576,
                &[
                    &[576, 0, 0, 0, 0],
                    &[-261, 1260, -630, 252, -45],
                    &[120, -672, 1680, -672, 120],
                    &[-45, 252, -630, 1260, -261],
                    &[0, 0, 0, 0, 576],
                ],
            ),
        ),
        (
            4,
            3,
            Mat::from_scaled_rows(
                1944,
                &[
                    &[1944, 0, 0, 0, 0],
                    &[-1248, 5280, -3168, 1320, -240],
                    &[664, -3520, 7656, -3520, 664],
                    &[-240, 1320, -3168, 5280, -1248],
                    &[0, 0, 0, 0, 1944],
                ],
            ),
        ),
        (
            4,
            4,
            Mat::from_scaled_rows(
                4608,
                &[
                    &[4608, 0, 0, 0, 0],
                    &[-3429, 13860, -8910, 3780, -693],
                    &[1944, -10080, 20880, -10080, 1944],
                    &[-693, 3780, -8910, 13860, -3429],
                    &[0, 0, 0, 0, 4608],
                ],
            ),
        ),
        (
            5,
            3,
            Mat::from_scaled_rows(
                38880,
                &[
                    &[38880, 0, 0, 0, 0, 0],
                    &[-28480, 123200, -98560, 61600, -22400, 3520],
                    &[18400, -106400, 238000, -162400, 61040, -9760],
                    &[-9760, 61040, -162400, 238000, -106400, 18400],
                    &[3520, -22400, 61600, -98560, 123200, -28480],
                    &[0, 0, 0, 0, 0, 38880],
                ],
            ),
        ),
        (
            5,
            4,
            Mat::from_scaled_rows(
                122880,
                &[
                    &[122880, 0, 0, 0, 0, 0],
                    &[-105300, 438900, -376200, 239400, -87780, 13860],
                    &[74070, -418950, 906300, -646380, 247950, -40110],
                    &[-40110, 247950, -646380, 906300, -418950, 74070],
                    &[13860, -87780, 239400, -376200, 438900, -105300],
                    &[0, 0, 0, 0, 0, 122880],
                ],
            ),
        ),
    ]
}
