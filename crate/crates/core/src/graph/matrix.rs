use crate::error::{Error, Result};
use crate::resource::Resource;

use super::InterfaceId;

/// Per-node allocation matrix over (in-interface, out-interface) pairs.
///
/// Slot 0 is the local interface, slot `e + 1` is external interface `e`.
/// Row sums (divergents) and column sums (convergents) are kept alongside the
/// entries and refreshed on every write.
#[derive(Clone, Debug, PartialEq)]
pub struct AllocationMatrix<R> {
    size: usize,
    entries: Vec<R>,
    row_sums: Vec<R>,
    col_sums: Vec<R>,
}

impl<R: Resource> AllocationMatrix<R> {
    /// Zero matrix for a node with `external` external interfaces.
    pub fn zeros(external: usize) -> Self {
        let size = external + 1;
        Self {
            size,
            entries: vec![R::zero(); size * size],
            row_sums: vec![R::zero(); size],
            col_sums: vec![R::zero(); size],
        }
    }

    /// Number of interfaces, local one included.
    pub fn interface_count(&self) -> usize {
        self.size
    }

    pub fn contains(&self, iface: InterfaceId) -> bool {
        iface.slot() < self.size
    }

    fn check(&self, iface: InterfaceId) -> Result<usize> {
        let slot = iface.slot();
        if slot < self.size {
            Ok(slot)
        } else {
            Err(Error::UnknownInterface {
                node: String::from("?"),
                interface: iface.to_string(),
            })
        }
    }

    pub fn get(&self, ingress: InterfaceId, egress: InterfaceId) -> &R {
        &self.entries[ingress.slot() * self.size + egress.slot()]
    }

    /// Divergent: sum of the row of `iface`.
    pub fn divergent(&self, iface: InterfaceId) -> &R {
        &self.row_sums[iface.slot()]
    }

    /// Convergent: sum of the column of `iface`.
    pub fn convergent(&self, iface: InterfaceId) -> &R {
        &self.col_sums[iface.slot()]
    }

    pub(crate) fn set(&mut self, ingress: InterfaceId, egress: InterfaceId, value: R) -> Result<()> {
        if value.is_invalid() {
            return Err(Error::InvalidAmount(format!("pair allocation must be non-negative, got {value}")));
        }
        let (r, c) = (self.check(ingress)?, self.check(egress)?);
        self.entries[r * self.size + c] = value;
        self.row_sums[r] = self.row_sum_slow(r);
        self.col_sums[c] = self.col_sum_slow(c);
        Ok(())
    }

    fn row_sum_slow(&self, r: usize) -> R {
        self.entries[r * self.size..(r + 1) * self.size]
            .iter()
            .cloned()
            .fold(R::zero(), |acc, x| acc + x)
    }

    fn col_sum_slow(&self, c: usize) -> R {
        (0..self.size)
            .map(|r| self.entries[r * self.size + c].clone())
            .fold(R::zero(), |acc, x| acc + x)
    }

    /// Iterates every interface of this matrix, local first.
    pub fn interfaces(&self) -> impl Iterator<Item = InterfaceId> {
        (0..self.size).map(InterfaceId::from_slot)
    }

    /// Iterates all entries as `(in, out, value)`, row-major.
    pub fn entries(&self) -> impl Iterator<Item = (InterfaceId, InterfaceId, &R)> + '_ {
        self.entries.iter().enumerate().map(move |(k, v)| {
            (
                InterfaceId::from_slot(k / self.size),
                InterfaceId::from_slot(k % self.size),
                v,
            )
        })
    }

    /// Replaces all entries at once; used by bulk constructions.
    pub(crate) fn from_dense(size: usize, entries: Vec<R>) -> Result<Self> {
        if entries.len() != size * size {
            return Err(Error::InvalidGraph("dense matrix has wrong shape".into()));
        }
        if let Some(bad) = entries.iter().find(|v| v.is_invalid()) {
            return Err(Error::InvalidAmount(format!("pair allocation must be non-negative, got {bad}")));
        }
        let mut m = Self {
            size,
            entries,
            row_sums: Vec::with_capacity(size),
            col_sums: Vec::with_capacity(size),
        };
        m.row_sums = (0..size).map(|r| m.row_sum_slow(r)).collect();
        m.col_sums = (0..size).map(|c| m.col_sum_slow(c)).collect();
        Ok(m)
    }

    pub fn map<S: Resource>(&self, f: impl Fn(&R) -> S) -> AllocationMatrix<S> {
        AllocationMatrix::from_dense(self.size, self.entries.iter().map(f).collect())
            .expect("mapping preserves shape")
    }
}
