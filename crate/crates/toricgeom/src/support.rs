use crate::{Character, Fan, GeomError, Twist};

/// Axis-aligned box of characters `lo ≤ m ≤ hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightBox {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl WeightBox {
    /// All characters in lex order.
    pub fn points(&self) -> Vec<Character> {
        let n = self.lo.len();
        if self.lo.iter().zip(&self.hi).any(|(a, b)| a > b) {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut cur = self.lo.clone();
        loop {
            out.push(cur.clone());
            let mut k = n;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if cur[k] < self.hi[k] {
                    cur[k] += 1;
                    cur[(k + 1)..n].copy_from_slice(&self.lo[(k + 1)..n]);
                    break;
                }
            }
        }
    }

    pub fn contains(&self, m: &[i64]) -> bool {
        m.iter().zip(self.lo.iter().zip(&self.hi)).all(|(x, (a, b))| a <= x && x <= b)
    }

    /// Whether `m` lies in one of the `depth` outermost layers.
    pub fn in_shell(&self, m: &[i64], depth: i64) -> bool {
        m.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .any(|(x, (a, b))| *x < a + depth || *x > b - depth)
    }
}

/// Default search radius `2·(max|a_ρ| + n + 1)`.
pub fn default_radius(fan: &Fan, twist: Option<&Twist>) -> i64 {
    2 * (twist.map_or(0, |t| t.max_abs()) + fan.rank() as i64 + 1)
}

/// Bounding box of the twist polytope's vertices, widened by `radius`.
pub fn weight_box(fan: &Fan, twist: Option<&Twist>, radius: i64) -> WeightBox {
    let n = fan.rank();
    let verts = match twist {
        Some(t) => t.local_characters(fan),
        None => vec![vec![0; n]],
    };
    let lo = (0..n).map(|k| verts.iter().map(|v| v[k]).min().unwrap_or(0) - radius).collect();
    let hi = (0..n).map(|k| verts.iter().map(|v| v[k]).max().unwrap_or(0) + radius).collect();
    WeightBox { lo, hi }
}

/// Characters in the two outermost layers of the box.
pub fn shell_points(b: &WeightBox) -> Vec<Character> {
    b.points().into_iter().filter(|m| b.in_shell(m, 2)).collect()
}

/// Search weights for a run, lex ordered.
///
/// `shell_exact(m)` must report whether every per-weight complex of the run
/// is exact at `m`; it is evaluated on the two outermost layers and any
/// failure is returned as [`GeomError::RadiusTooSmall`].
pub fn weight_support(
    fan: &Fan,
    twist: Option<&Twist>,
    radius: i64,
    shell_exact: impl Fn(&[i64]) -> bool,
) -> Result<Vec<Character>, GeomError> {
    let b = weight_box(fan, twist, radius);
    if let Some(witness) = shell_points(&b).into_iter().find(|m| !shell_exact(m)) {
        return Err(GeomError::RadiusTooSmall { radius, witness });
    }
    Ok(b.points())
}
