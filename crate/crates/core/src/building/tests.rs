use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::levels::sylow2_p;
use crate::lattice_group::enumerate_similitudes;
use crate::KElt;

/// Subgroups of `(Z/2^r)^3` as bitmasks over its `8^r` elements.
mod subgroup_oracle {
    use std::collections::{BTreeSet, VecDeque};

    pub type Mask = Vec<u64>;

    pub struct Group {
        pub side: u64,
    }

    impl Group {
        pub fn new(r: u32) -> Self {
            Self { side: 1 << r }
        }

        pub fn size(&self) -> u64 {
            self.side.pow(3)
        }

        fn index(&self, v: [u64; 3]) -> u64 {
            v[0] + self.side * (v[1] + self.side * v[2])
        }

        fn element(&self, i: u64) -> [u64; 3] {
            [i % self.side, (i / self.side) % self.side, i / (self.side * self.side)]
        }

        fn add(&self, a: [u64; 3], b: [u64; 3]) -> [u64; 3] {
            std::array::from_fn(|k| (a[k] + b[k]) % self.side)
        }

        fn empty(&self) -> Mask {
            vec![0; (self.size() as usize).div_ceil(64)]
        }

        pub fn contains(&self, m: &Mask, v: [u64; 3]) -> bool {
            let i = self.index(v);
            m[(i / 64) as usize] >> (i % 64) & 1 == 1
        }

        fn insert(&self, m: &mut Mask, v: [u64; 3]) {
            let i = self.index(v);
            m[(i / 64) as usize] |= 1 << (i % 64);
        }

        fn members(&self, m: &Mask) -> Vec<[u64; 3]> {
            (0..self.size()).map(|i| self.element(i)).filter(|v| self.contains(m, *v)).collect()
        }

        /// `S + <g>`.
        pub fn extend(&self, s: &Mask, g: [u64; 3]) -> Mask {
            let base = self.members(s);
            let mut out = self.empty();
            let mut mult = [0, 0, 0];
            loop {
                for b in &base {
                    self.insert(&mut out, self.add(*b, mult));
                }
                mult = self.add(mult, g);
                if mult == [0, 0, 0] {
                    break;
                }
            }
            out
        }

        pub fn all_subgroups(&self) -> BTreeSet<Mask> {
            let mut zero = self.empty();
            self.insert(&mut zero, [0, 0, 0]);
            let mut seen = BTreeSet::from([zero.clone()]);
            let mut queue = VecDeque::from([zero]);
            while let Some(s) = queue.pop_front() {
                for i in 0..self.size() {
                    let g = self.element(i);
                    if self.contains(&s, g) {
                        continue;
                    }
                    let t = self.extend(&s, g);
                    if seen.insert(t.clone()) {
                        queue.push_back(t);
                    }
                }
            }
            seen
        }

        /// Not contained in `2 (Z/2^r)^3`.
        pub fn is_primitive(&self, m: &Mask) -> bool {
            self.members(m).iter().any(|v| v.iter().any(|x| x % 2 == 1))
        }

        pub fn span(&self, rows: &[[u64; 3]]) -> Mask {
            let mut s = self.empty();
            self.insert(&mut s, [0, 0, 0]);
            for r in rows {
                s = self.extend(&s, r.map(|x| x % self.side));
            }
            s
        }
    }
}

fn scalar(a: i64, b: i64) -> MatK {
    MatK::scalar(KElt::from_ints(a, b))
}

#[test]
fn proper_subspaces_of_f2_cubed() {
    // oracle: subsets of F2^3 \ {0} whose union with 0 is closed under addition
    let mut count = 0;
    for mask in 1u32..(1 << 7) {
        let set: Vec<u8> = (1u8..8).filter(|v| mask >> (v - 1) & 1 == 1).collect();
        let closed = set.iter().all(|a| set.iter().all(|b| a == b || set.contains(&(a ^ b))));
        if closed && set.len() < 7 {
            count += 1;
        }
    }
    assert_eq!(count, 14);
    assert_eq!(proper_subspaces_f2().len(), 14);
}

#[test]
fn normal_form() {
    let s = standard_vertex();
    assert!(s.is_normalized());
    assert_eq!(BuildingVertex::from_rows([[2, 0, 0], [0, 2, 0], [0, 0, 2]]).unwrap(), s);
    assert_eq!(BuildingVertex::from_rows([[3, 1, 0], [5, 0, 1], [1, 1, 1]]).unwrap(), s);
    // the diagonal is not sorted in general
    let v = BuildingVertex::from_rows([[2, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap();
    assert_eq!(v.rep_u64(), Some([[2, 0, 0], [0, 1, 0], [0, 0, 1]]));
    assert_eq!(v.vertex_type(), 1);
    let w = BuildingVertex::from_rows([[4, 6, 2], [0, 2, 2], [0, 0, 8]]).unwrap();
    assert_eq!(w.rep_u64(), Some([[2, 0, 2], [0, 1, 1], [0, 0, 4]]));
    assert!(w.is_normalized());
    assert_eq!(BuildingVertex::from_rows([[1, 1, 0], [1, 1, 0], [0, 0, 1]]), Err(Error::NotInvertible));
}

#[test]
fn neighbor_structure() {
    let s = standard_vertex();
    let ns = s.neighbors();
    assert_eq!(ns.len(), 14);
    assert!(ns.iter().all(|u| u.vertex_type() == 1 || u.vertex_type() == 2));
    assert!(ns.iter().all(|u| s.distance(u) == 1 && u.is_normalized()));
    for u in ball(&s, 2) {
        let nu = u.neighbors();
        assert_eq!(nu.len(), 14);
        for w in nu.iter().step_by(4) {
            assert!(w.neighbors().contains(&u));
            assert_ne!(w.vertex_type(), u.vertex_type());
        }
    }
}

#[test]
fn ball_sizes_match_subgroup_oracle() {
    let s = standard_vertex();
    assert_eq!(ball(&s, 0), vec![s.clone()]);
    assert_eq!(ball(&s, 1).len(), 15);
    for r in 1..=2 {
        let g = subgroup_oracle::Group::new(r);
        let expected: BTreeSet<_> = g.all_subgroups().into_iter().filter(|m| g.is_primitive(m)).collect();
        let found: BTreeSet<_> = ball(&s, r).iter().map(|v| g.span(&v.rep_u64().unwrap())).collect();
        assert_eq!(found.len(), ball(&s, r).len(), "encoding is injective");
        assert_eq!(found, expected, "r = {r}");
    }
}

#[test]
fn layers_agree_with_distance() {
    let s = standard_vertex();
    let layers = ball_layers(&s, 2);
    assert_eq!(layers.iter().map(Vec::len).collect::<Vec<_>>()[..2], [1, 14]);
    for (d, layer) in layers.iter().enumerate() {
        for v in layer {
            assert_eq!(s.distance(v), d as u32);
            assert_eq!(v.distance(&s), d as u32);
        }
    }
}

#[test]
fn scalars_act_trivially() {
    let s = standard_vertex();
    let v = &ball(&s, 2)[7];
    for m in [MatK::identity(), scalar(2, 0), scalar(0, 1), scalar(-1, -1), scalar(3, 5)] {
        assert_eq!(act_default(&m, &s).unwrap(), s);
        assert_eq!(act_default(&m, v).unwrap(), *v);
    }
}

#[test]
fn precision_is_raised_and_capped() {
    let s = standard_vertex();
    let big = MatK::diag([num_traits::pow(KElt::lambda(), 400), KElt::one(), KElt::one()]);
    let v = act(&big, &s, 8).unwrap();
    assert!(v.is_normalized());
    assert_eq!(v.exponents(), [400, 0, 0]);
    assert!(v.rep_u64().is_none());
    let huge = MatK::diag([num_traits::pow(KElt::lambda(), 1100), KElt::one(), KElt::one()]);
    assert_eq!(act(&huge, &s, 64), Err(Error::PrecisionCeiling(MAX_PRECISION)));
}

#[test]
fn action_is_simplicial_and_compatible() {
    let s = standard_vertex();
    let unit = enumerate_similitudes(0);
    let two = enumerate_similitudes(1);
    let verts = ball(&s, 1);
    for g in two.iter().step_by(37) {
        for d in unit.iter().step_by(5) {
            let gd = g.matrix() * d.matrix();
            for v in &verts {
                let lhs = act_default(&gd, v).unwrap();
                let rhs = act_default(g.matrix(), &act_default(d.matrix(), v).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        let image = act_default(g.matrix(), &s).unwrap();
        for u in s.neighbors().iter().step_by(3) {
            assert!(act_default(g.matrix(), u).unwrap().neighbors().contains(&image));
        }
    }
}

#[test]
fn valuation_audit_for_factor_two() {
    let s = standard_vertex();
    for g in enumerate_similitudes(1) {
        let img = act_default(g.matrix(), &s).unwrap();
        let v = match valuation(g.det(), Place::Lambda).unwrap() {
            Valuation::Finite(x) => x,
            Valuation::Infinity => unreachable!(),
        };
        assert_eq!(i64::from(img.vertex_type()), v.rem_euclid(3));
        assert!(s.distance(&img) <= 1);
        assert_eq!(img == s, v % 3 == 0);
    }
}

#[test]
fn group_shifts_types_uniformly() {
    let p = sylow2_p();
    let s = standard_vertex();
    let shifts: BTreeSet<u32> = group_members(1, &p)
        .iter()
        .filter(|(k, g)| *k == 1 && !g.is_scalar())
        .map(|(_, g)| act_default(g.matrix(), &s).unwrap().vertex_type())
        .collect();
    assert_eq!(shifts.len(), 2, "factor-2 members reach both neighbor types: {shifts:?}");
    assert!(!shifts.contains(&0));
}

#[test]
fn transitivity_at_radius_one() {
    let p = sylow2_p();
    let report = check_transitivity(1, 1, &p).unwrap();
    assert_eq!(report.layer_sizes, vec![1, 14]);
    assert!(report.all_reached(), "{:?}", report.unreached);
    assert_eq!(report.reached, vec![1, 14]);
    assert!(report.stabilizer_free());
    for w in &report.witnesses {
        assert_eq!(act_default(w.gamma.matrix(), &standard_vertex()).unwrap(), w.vertex);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_form_is_canonical(rows in proptest::array::uniform3(proptest::array::uniform3(-9i64..=9)), k in 0u32..3) {
        let Ok(v) = BuildingVertex::from_rows(rows) else { return Ok(()); };
        prop_assert!(v.is_normalized());
        // a change of basis by an integral unimodular matrix and a homothety do not move the class
        let w: [[i64; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| {
            (rows[i][j] + if i == 0 { rows[1][j] } else { 0 }) << k
        }));
        prop_assert_eq!(BuildingVertex::from_rows(w).unwrap(), v.clone());
    }
}
