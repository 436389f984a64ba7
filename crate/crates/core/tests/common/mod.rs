//! Independent reference models: hand-entered Gram matrices and curve
//! lists, evaluated with plain integer and rational arithmetic.

#![allow(dead_code)]

use drycert::Q;

pub struct Model {
    pub name: &'static str,
    pub gram: Vec<Vec<i128>>,
    pub c1: Vec<i128>,
    pub curves: Vec<Vec<i128>>,
}

impl Model {
    pub fn f(g: i128) -> Model {
        Model {
            name: if g == 0 { "F0" } else { "F1" },
            gram: vec![vec![-g, 1], vec![1, 0]],
            c1: vec![2, g + 2],
            curves: vec![vec![1, 0], vec![0, 1]],
        }
    }

    pub fn dp3() -> Model {
        let mut curves = vec![vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]];
        curves.extend([vec![1, -1, -1, 0], vec![1, -1, 0, -1], vec![1, 0, -1, -1]]);
        Model {
            name: "dP3",
            gram: vec![vec![1, 0, 0, 0], vec![0, -1, 0, 0], vec![0, 0, -1, 0], vec![0, 0, 0, -1]],
            c1: vec![3, -1, -1, -1],
            curves,
        }
    }

    pub fn dot(&self, a: &[i128], b: &[i128]) -> i128 {
        let mut s = 0;
        for i in 0..a.len() {
            for j in 0..b.len() {
                s += a[i] * self.gram[i][j] * b[j];
            }
        }
        s
    }

    pub fn dotq(&self, a: &[Q], b: &[Q]) -> Q {
        let mut s = Q::from_integer(0);
        for i in 0..a.len() {
            for j in 0..b.len() {
                s += a[i] * Q::from_integer(self.gram[i][j]) * b[j];
            }
        }
        s
    }

    pub fn c1q(&self) -> Vec<Q> {
        self.c1.iter().map(|x| Q::from_integer(*x)).collect()
    }

    pub fn c1sq(&self) -> Q {
        Q::from_integer(self.dot(&self.c1, &self.c1))
    }

    pub fn ample(&self, d: &[Q]) -> bool {
        self.curves.iter().all(|c| {
            let cq: Vec<Q> = c.iter().map(|x| Q::from_integer(*x)).collect();
            self.dotq(d, &cq) > Q::from_integer(0)
        })
    }

    /// `phi - N (1/2 + b) c1`.
    pub fn shifted(&self, phi: &[i128], n: i128, b: Q) -> Vec<Q> {
        let k = Q::from_integer(n) * (Q::new(1, 2) + b);
        phi.iter().zip(&self.c1).map(|(p, c)| Q::from_integer(*p) - k * Q::from_integer(*c)).collect()
    }

    /// `(R, q)` from their defining formulas.
    pub fn r_q(&self, phi: &[i128], n: i128) -> (Q, Q) {
        let phiq: Vec<Q> = phi.iter().map(|x| Q::from_integer(*x)).collect();
        let nq = Q::from_integer(n);
        let r = self.dotq(&phiq, &self.c1q()) / (Q::from_integer(2) * nq)
            + self.c1sq() / Q::from_integer(6)
            + Q::new(1, 2);
        let s = self.shifted(phi, n, Q::from_integer(0));
        let q = self.dotq(&s, &s) / (nq * nq * self.c1sq());
        (r, q)
    }

    pub fn omega0(&self, phi: &[i128], n: i128, b: Q) -> Q {
        let (r, q) = self.r_q(phi, n);
        r + self.c1sq() / Q::from_integer(4) * (b + q / b)
    }

    /// Largest `p` with `p/d` feasible, by walking from `start`.
    pub fn top_numerator(&self, phi: &[i128], n: i128, d: i128, start: i128) -> Option<i128> {
        let feasible = |p: i128| p > 0 && self.ample(&self.shifted(phi, n, Q::new(p, d)));
        let mut p = start.max(1);
        if feasible(p) {
            while feasible(p + 1) {
                p += 1;
            }
            Some(p)
        } else {
            while p > 1 {
                p -= 1;
                if feasible(p) {
                    return Some(p);
                }
            }
            None
        }
    }

    /// Grid search for a `b = p/d`, `d <= max_den`, meeting both conditions.
    pub fn grid_dry(&self, phi: &[i128], omega: i128, n: i128, max_den: i128) -> bool {
        let w = Q::new(omega, n);
        let (r, q) = self.r_q(phi, n);
        let quarter = self.c1sq() / Q::from_integer(4);
        let omega0 = |b: Q| r + quarter * (b + q / b);
        let mut guess = 1;
        for d in 1..=max_den {
            let Some(p) = self.top_numerator(phi, n, d, guess) else {
                guess = 1;
                continue;
            };
            // omega0 decreases up to the top feasible point; check the neighbour too
            if w > omega0(Q::new(p, d)) || (p > 1 && w > omega0(Q::new(p - 1, d))) {
                return true;
            }
            guess = (p * (d + 1)) / d;
        }
        false
    }
}
