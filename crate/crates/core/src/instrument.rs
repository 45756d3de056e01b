//! Instrumentation counters.
//!
//! The kernel's structural operations (substitution, normalisation,
//! shifting) bump a node-visit counter every time they inspect a term or
//! body node. Thinning composition and cover arithmetic never count as
//! visits, so operations that claim to be traversal-free can be checked by
//! asserting a zero delta. Validators and printers do not count visits.
//!
//! Hereditary substitution additionally records, per hereditary call, the
//! termination metric before and after (the summed kind size of the active
//! scope); any non-decrease is tallied as a violation.
//!
//! With the `std` feature the counters are thread-local, so tests running
//! on separate threads do not interfere. Without `std` they fall back to
//! process-global atomics.

#[cfg(feature = "std")]
mod imp {
    use core::cell::Cell;

    std::thread_local! {
        static VISITS: Cell<u64> = const { Cell::new(0) };
        static HERED_CALLS: Cell<u64> = const { Cell::new(0) };
        static METRIC_VIOLATIONS: Cell<u64> = const { Cell::new(0) };
    }

    pub fn visit() {
        VISITS.with(|c| c.set(c.get() + 1));
    }

    pub fn visits() -> u64 {
        VISITS.with(Cell::get)
    }

    pub fn record_hered(mu_before: u64, mu_after: u64) {
        HERED_CALLS.with(|c| c.set(c.get() + 1));
        if mu_after >= mu_before {
            METRIC_VIOLATIONS.with(|c| c.set(c.get() + 1));
        }
    }

    pub fn hered_calls() -> u64 {
        HERED_CALLS.with(Cell::get)
    }

    pub fn metric_violations() -> u64 {
        METRIC_VIOLATIONS.with(Cell::get)
    }

    pub fn reset() {
        VISITS.with(|c| c.set(0));
        HERED_CALLS.with(|c| c.set(0));
        METRIC_VIOLATIONS.with(|c| c.set(0));
    }
}

#[cfg(not(feature = "std"))]
mod imp {
    use core::sync::atomic::{AtomicU64, Ordering};

    static VISITS: AtomicU64 = AtomicU64::new(0);
    static HERED_CALLS: AtomicU64 = AtomicU64::new(0);
    static METRIC_VIOLATIONS: AtomicU64 = AtomicU64::new(0);

    pub fn visit() {
        VISITS.fetch_add(1, Ordering::Relaxed);
    }

    pub fn visits() -> u64 {
        VISITS.load(Ordering::Relaxed)
    }

    pub fn record_hered(mu_before: u64, mu_after: u64) {
        HERED_CALLS.fetch_add(1, Ordering::Relaxed);
        if mu_after >= mu_before {
            METRIC_VIOLATIONS.fetch_add(1, Ordering::Relaxed);
        }
    }

    pub fn hered_calls() -> u64 {
        HERED_CALLS.load(Ordering::Relaxed)
    }

    pub fn metric_violations() -> u64 {
        METRIC_VIOLATIONS.load(Ordering::Relaxed)
    }

    pub fn reset() {
        VISITS.store(0, Ordering::Relaxed);
        HERED_CALLS.store(0, Ordering::Relaxed);
        METRIC_VIOLATIONS.store(0, Ordering::Relaxed);
    }
}

/// Record one term/body node visit.
pub(crate) fn visit() {
    imp::visit();
}

/// Number of node visits recorded since the last [`reset`].
pub fn visits() -> u64 {
    imp::visits()
}

/// Record a hereditary call together with its termination metric.
pub(crate) fn record_hered(mu_before: u64, mu_after: u64) {
    imp::record_hered(mu_before, mu_after);
}

/// Number of hereditary calls recorded since the last [`reset`].
pub fn hered_calls() -> u64 {
    imp::hered_calls()
}

/// Number of hereditary calls whose termination metric failed to decrease.
pub fn metric_violations() -> u64 {
    imp::metric_violations()
}

/// Reset all counters to zero.
pub fn reset() {
    imp::reset();
}

/// Run `f` and return its result together with the node visits it caused.
pub fn counting<R>(f: impl FnOnce() -> R) -> (R, u64) {
    let before = visits();
    let out = f();
    (out, visits() - before)
}
