"""Memo for shifted Gauss factors shared by the shells of one grid-series sum."""

from threading import Lock
from typing import Any, Callable, Dict, Hashable, Optional, TypeVar

T = TypeVar("T")


class FactorCache:
    """Thread-safe memo keyed by (k, M, N) tuples, with hit/miss statistics.

    One instance lives for one evaluation; entries never expire.
    """

    def __init__(self) -> None:
        self._cache: Dict[Hashable, Any] = {}
        self._lock = Lock()
        self._stats = {"hits": 0, "misses": 0}

    def get(self, key: Hashable) -> Optional[Any]:
        """Get a value from the cache.

        Args:
            key: Cache key

        Returns:
            Cached value if present, None otherwise
        """
        with self._lock:
            if key not in self._cache:
                self._stats["misses"] += 1
                return None

            self._stats["hits"] += 1
            return self._cache[key]

    def set(self, key: Hashable, value: Any) -> None:
        """Store a value."""
        with self._lock:
            self._cache[key] = value

    def __contains__(self, key: Hashable) -> bool:
        with self._lock:
            return key in self._cache

    def __len__(self) -> int:
        with self._lock:
            return len(self._cache)

    def clear(self) -> None:
        """Clear all cache entries."""
        with self._lock:
            self._cache.clear()
            self._stats = {"hits": 0, "misses": 0}

    def get_stats(self) -> Dict[str, Any]:
        """Get cache statistics.

        Returns:
            Dictionary with hits, misses, hit_rate and cache_size
        """
        with self._lock:
            total_requests = self._stats["hits"] + self._stats["misses"]
            hit_rate = (
                self._stats["hits"] / total_requests if total_requests > 0 else 0.0
            )

            return {
                "hits": self._stats["hits"],
                "misses": self._stats["misses"],
                "hit_rate": hit_rate,
                "cache_size": len(self._cache),
                "total_requests": total_requests,
            }

    def cached_call(self, key: Hashable, func: Callable[[], T]) -> T:
        """Return the cached value for key, computing and storing it on a miss.

        Args:
            key: Cache key
            func: Function to execute if not cached

        Returns:
            Cached or computed result
        """
        cached_result = self.get(key)
        if cached_result is not None:
            return cached_result

        result = func()
        self.set(key, result)
        return result
