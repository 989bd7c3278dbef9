//! Binary checkpoint layout (all integers `u64`, little-endian):
//!
//! ```text
//! magic    8 bytes  "XXZMPS01"
//! width    1 byte   bytes per real (4 or 8)
//! n, local_dim, center
//! log_scale         one real
//! bond_dims         n − 1 integers
//! tensors           per site, (left, phys, right) row-major,
//!                   each entry as interleaved (re, im) reals
//! ```

use std::io::{Read, Write};

use num_complex::Complex;

use super::chain::{MatrixProductChain, SiteTensor};
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAGIC: &[u8; 8] = b"XXZMPS01";

impl<T: Real> MatrixProductChain<T> {
    pub fn to_checkpoint_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.push(T::BYTES as u8);
        for v in [self.len(), self.local_dim(), self.center()] {
            out.extend_from_slice(&(v as u64).to_le_bytes());
        }
        self.log_scale().write_le(&mut out);
        for d in self.bond_dims() {
            out.extend_from_slice(&(d as u64).to_le_bytes());
        }
        for site in self.sites() {
            for z in site.data() {
                z.re.write_le(&mut out);
                z.im.write_le(&mut out);
            }
        }
        out
    }

    pub fn write_checkpoint<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&self.to_checkpoint_bytes())?;
        Ok(())
    }

    pub fn from_checkpoint_bytes(bytes: &[u8]) -> Result<Self> {
        let mut cur = Cursor { bytes, pos: 0 };
        if cur.take(8)? != MAGIC {
            return Err(Error::Checkpoint("bad magic".into()));
        }
        let width = cur.take(1)?[0] as usize;
        if width != T::BYTES {
            return Err(Error::Checkpoint(format!("stored reals are {width} bytes, reader expects {}", T::BYTES)));
        }
        let n = cur.usize()?;
        let local_dim = cur.usize()?;
        let center = cur.usize()?;
        if n < 2 || local_dim < 2 {
            return Err(Error::Checkpoint(format!("implausible header n={n} d={local_dim}")));
        }
        let log_scale = cur.real::<T>()?;
        let mut dims = vec![1usize];
        for _ in 0..n - 1 {
            dims.push(cur.usize()?);
        }
        dims.push(1);
        let mut sites = Vec::with_capacity(n);
        for i in 0..n {
            let count = dims[i]
                .checked_mul(local_dim)
                .and_then(|x| x.checked_mul(dims[i + 1]))
                .ok_or_else(|| Error::Checkpoint("tensor size overflows".into()))?;
            if count.saturating_mul(2 * T::BYTES) > cur.remaining() {
                return Err(Error::Checkpoint("truncated tensor data".into()));
            }
            let mut data = Vec::with_capacity(count);
            for _ in 0..count {
                let re = cur.real::<T>()?;
                let im = cur.real::<T>()?;
                data.push(Complex::new(re, im));
            }
            sites.push(SiteTensor::new(dims[i], local_dim, dims[i + 1], data)?);
        }
        if cur.remaining() != 0 {
            return Err(Error::Checkpoint(format!("{} trailing bytes", cur.remaining())));
        }
        Self::from_parts(local_dim, sites, center, log_scale).map_err(|e| Error::Checkpoint(e.to_string()))
    }

    pub fn read_checkpoint<R: Read>(mut r: R) -> Result<Self> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        Self::from_checkpoint_bytes(&bytes)
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(len).filter(|&e| e <= self.bytes.len());
        let end = end.ok_or_else(|| Error::Checkpoint("unexpected end of data".into()))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn usize(&mut self) -> Result<usize> {
        let mut buf = [0u8; 8];
        buf.copy_from_slice(self.take(8)?);
        usize::try_from(u64::from_le_bytes(buf)).map_err(|_| Error::Checkpoint("integer overflow".into()))
    }

    fn real<T: Real>(&mut self) -> Result<T> {
        Ok(T::read_le(self.take(T::BYTES)?))
    }

    fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }
}
