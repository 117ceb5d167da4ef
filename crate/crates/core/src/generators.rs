//! Graph families: random regular graphs, SL2(F_p) Cayley graphs, fixtures.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Seed for every randomized routine. Expanded to generator state with
/// SplitMix64, then fed to xoshiro256++.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed(pub u64);

impl Seed {
    pub fn rng(self) -> Xoshiro256PlusPlus {
        Xoshiro256PlusPlus::seed_from_u64(self.0)
    }
}

impl From<u64> for Seed {
    fn from(s: u64) -> Self {
        Seed(s)
    }
}

/// Restarts allowed before [`random_regular`] gives up.
pub const RANDOM_REGULAR_ATTEMPTS: usize = 1000;

/// Random simple `d`-regular graph on `n` vertices from the pairing model.
///
/// Stubs are shuffled and paired; a pair that would form a loop or a parallel
/// edge is returned to the pool and re-paired in the next pass. An attempt is
/// abandoned once the remaining stubs cannot be paired at all.
pub fn random_regular(n: usize, d: usize, seed: Seed) -> Result<Graph> {
    if d < 3 || d >= n || !(n * d).is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "random regular graph needs 3 <= d < n and n*d even (n = {n}, d = {d})"
        )));
    }
    let mut rng = seed.rng();
    for _ in 0..RANDOM_REGULAR_ATTEMPTS {
        if let Some(adj) = try_pairing(n, d, &mut rng) {
            let edges = adj
                .iter()
                .enumerate()
                .flat_map(|(u, row)| row.iter().filter(move |&&v| u < v).map(move |&v| (u, v)));
            return Graph::from_edges(n, edges);
        }
    }
    Err(Error::GenerationFailed {
        attempts: RANDOM_REGULAR_ATTEMPTS,
    })
}

fn try_pairing(n: usize, d: usize, rng: &mut Xoshiro256PlusPlus) -> Option<Vec<Vec<usize>>> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::with_capacity(d); n];
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    let mut leftover = Vec::new();
    while !stubs.is_empty() {
        stubs.shuffle(rng);
        leftover.clear();
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u != v && !adj[u].contains(&v) {
                adj[u].push(v);
                adj[v].push(u);
            } else {
                leftover.extend_from_slice(pair);
            }
        }
        if !leftover.is_empty() && !can_pair_any(&adj, &leftover) {
            return None;
        }
        std::mem::swap(&mut stubs, &mut leftover);
    }
    Some(adj)
}

fn can_pair_any(adj: &[Vec<usize>], stubs: &[usize]) -> bool {
    let mut distinct = stubs.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    distinct
        .iter()
        .enumerate()
        .any(|(i, &u)| distinct[i + 1..].iter().any(|&v| !adj[u].contains(&v)))
}

/// Largest SL2 group order [`cayley_sl2`] will build.
pub const SL2_MAX_ORDER: usize = 300_000;

/// Element of SL2(F_p), row-major `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Sl2Element {
    p: u64,
    m: [u64; 4],
}

impl Sl2Element {
    /// Reduces the entries mod `p` and checks `ad - bc = 1`.
    pub fn new(p: u64, entries: [i64; 4]) -> Result<Self> {
        let m = entries.map(|x| x.rem_euclid(p as i64) as u64);
        let e = Sl2Element { p, m };
        if e.det() != 1 % p {
            return Err(Error::NotInSl2(m));
        }
        Ok(e)
    }

    fn det(&self) -> u64 {
        let [a, b, c, d] = self.m;
        (a * d % self.p + self.p - b * c % self.p) % self.p
    }

    pub fn entries(&self) -> [u64; 4] {
        self.m
    }

    pub fn identity(p: u64) -> Self {
        Sl2Element { p, m: [1, 0, 0, 1] }
    }

    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = self.m;
        let p = self.p;
        Sl2Element {
            p,
            m: [d, (p - b) % p, (p - c) % p, a],
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = rhs.m;
        let p = self.p;
        Sl2Element {
            p,
            m: [
                (a * e + b * g) % p,
                (a * f + b * h) % p,
                (c * e + d * g) % p,
                (c * f + d * h) % p,
            ],
        }
    }
}

/// The free pair `[[1,2],[0,1]]`, `[[1,0],[2,1]]` (without inverses).
pub fn default_sl2_generators(p: u64) -> Vec<Sl2Element> {
    vec![
        Sl2Element::new(p, [1, 2, 0, 1]).expect("unipotent"),
        Sl2Element::new(p, [1, 0, 2, 1]).expect("unipotent"),
    ]
}

pub fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|i| i * i <= p)
            .all(|i| !p.is_multiple_of(i))
}

/// Cayley graph of SL2(F_p) with edges `x ~ s x`. The generator list is
/// closed under inverses and deduplicated; vertex ids follow the
/// lexicographic order of matrix entries.
pub fn cayley_sl2(p: u64, generators: &[Sl2Element]) -> Result<Graph> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let order = (p * (p * p - 1)) as usize;
    if order > SL2_MAX_ORDER {
        return Err(Error::InvalidParameter(format!(
            "|SL2(F_{p})| = {order} exceeds the cap of {SL2_MAX_ORDER}"
        )));
    }
    let mut gens = Vec::new();
    for s in generators {
        if s.p != p {
            return Err(Error::InvalidParameter(format!(
                "generator {:?} is over F_{}, expected F_{p}",
                s.m, s.p
            )));
        }
        Sl2Element::new(p, s.m.map(|x| x as i64))?;
        gens.push(*s);
        gens.push(s.inverse());
    }
    gens.sort_unstable();
    gens.dedup();
    if gens.contains(&Sl2Element::identity(p)) {
        return Err(Error::InvalidParameter(
            "identity generator would create self-loops".into(),
        ));
    }

    let pu = p as usize;
    let key = |m: [u64; 4]| {
        ((m[0] as usize * pu + m[1] as usize) * pu + m[2] as usize) * pu + m[3] as usize
    };
    let mut elements = Vec::with_capacity(order);
    let mut index = vec![u32::MAX; pu.pow(4)];
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    let m = [a, b, c, d];
                    if (Sl2Element { p, m }).det() == 1 {
                        index[key(m)] = elements.len() as u32;
                        elements.push(Sl2Element { p, m });
                    }
                }
            }
        }
    }
    debug_assert_eq!(elements.len(), order);

    let mut edges = Vec::with_capacity(order * gens.len() / 2);
    for (x, e) in elements.iter().enumerate() {
        for s in &gens {
            let y = index[key(s.mul(e).m)] as usize;
            if x < y {
                edges.push((x, y));
            }
        }
    }
    Graph::from_edges(order, edges)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Fixture {
    Cycle(usize),
    Complete(usize),
    Petersen,
    Path(usize),
}

impl Fixture {
    pub fn check(&self) -> Result<()> {
        match *self {
            Fixture::Cycle(n) if n < 3 => Err(Error::InvalidParameter(format!(
                "cycle needs n >= 3, got {n}"
            ))),
            Fixture::Complete(0) | Fixture::Path(0) => {
                Err(Error::InvalidParameter("n must be positive".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Builds a named small graph. Panics on parameters rejected by
/// [`Fixture::check`].
pub fn fixture(f: Fixture) -> Graph {
    f.check().expect("valid fixture parameters");
    let (n, edges): (usize, Vec<(usize, usize)>) = match f {
        Fixture::Cycle(n) => (n, (0..n).map(|i| (i, (i + 1) % n)).collect()),
        Fixture::Complete(n) => (
            n,
            (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect(),
        ),
        Fixture::Path(n) => (n, (1..n).map(|i| (i - 1, i)).collect()),
        Fixture::Petersen => (
            10,
            (0..5)
                .flat_map(|i| [(i, (i + 1) % 5), (i, i + 5), (5 + i, 5 + (i + 2) % 5)])
                .collect(),
        ),
    };
    Graph::from_edges(n, edges).expect("fixture edges are simple")
}
