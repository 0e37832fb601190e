import hashlib
import os
import pathlib
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from fractions import Fraction
from logging import getLogger
from os.path import expanduser
from typing import Any, Callable, List, Optional, Sequence, TypeVar

from rapolytope._typing import FilePathOrBuffer
from rapolytope.constants import THREADS_ENV_VAR

try:
    import orjson as json

    _ORJSON = True
except ImportError:
    import json  # type: ignore

    _ORJSON = False

logger = getLogger("rapolytope.utils")

T = TypeVar("T")
R = TypeVar("R")


def resolve_thread_count(threads: Optional[int] = None) -> int:
    """
    Explicit argument first, then the RAPOLYTOPE_THREADS environment variable, then 1.
    """
    if threads is not None:
        if threads < 1:
            raise ValueError("`threads` must be at least 1, got {}".format(threads))
        return threads
    env_value = os.environ.get(THREADS_ENV_VAR)
    if env_value:
        try:
            return max(1, int(env_value))
        except ValueError:
            logger.warning(
                "ignoring %s=%r, expected an integer", THREADS_ENV_VAR, env_value
            )
    return 1


def chunked(items: Sequence[T], chunks: int) -> List[Sequence[T]]:
    if chunks <= 1 or len(items) <= 1:
        return [items]
    size = -(-len(items) // chunks)
    return [items[i:i + size] for i in range(0, len(items), size)]


def map_in_threads(
    func: Callable[[T], R], items: Sequence[T], threads: int = 1
) -> List[R]:
    """
    Applies func to every item, concurrently when threads > 1. Results keep the input order.
    """
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    logger.debug("running %s work items on %s threads", len(items), threads)
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(func, items))


def _json_default(obj: Any) -> Any:
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    raise TypeError(f"Object of type {type(obj).__name__} is not JSON serializable")


def dump_json(data: Any) -> bytes:
    """
    Deterministic JSON: sorted keys and two-space indentation.
    """
    if _ORJSON:
        return json.dumps(  # type: ignore
            data,
            default=_json_default,
            option=json.OPT_SORT_KEYS | json.OPT_INDENT_2,  # type: ignore
        )
    return json.dumps(data, default=_json_default, sort_keys=True, indent=2).encode()  # type: ignore


def load_json(raw: bytes) -> Any:
    return json.loads(raw)


def digest_bytes(raw: bytes) -> str:
    return hashlib.sha256(raw).hexdigest()


def get_file_path_or_buffer(filepath_or_buffer: FilePathOrBuffer) -> FilePathOrBuffer:
    if isinstance(filepath_or_buffer, (str, bytes, pathlib.Path)):
        return _stringify_path(filepath_or_buffer)

    if not _is_file_like(filepath_or_buffer):
        msg = "Invalid file path or buffer object type: {}".format(
            type(filepath_or_buffer)
        )
        raise ValueError(msg)

    return filepath_or_buffer


def write_output(data: bytes, filepath_or_buffer: FilePathOrBuffer) -> None:
    target = get_file_path_or_buffer(filepath_or_buffer)
    if isinstance(target, str):
        with open(target, "wb") as file:
            file.write(data)
        logger.info("wrote %s bytes to %s", len(data), target)
        return
    try:
        target.write(data)  # type: ignore
    except TypeError:
        target.write(data.decode())  # type: ignore


def _stringify_path(filepath_or_buffer: FilePathOrBuffer) -> FilePathOrBuffer:
    if isinstance(filepath_or_buffer, pathlib.Path):
        return str(filepath_or_buffer)
    if isinstance(filepath_or_buffer, bytes):
        return expanduser(filepath_or_buffer.decode())
    return _expand_user(filepath_or_buffer)


def _expand_user(
    filepath_or_buffer: FilePathOrBuffer,
) -> FilePathOrBuffer:
    if isinstance(filepath_or_buffer, str):
        return expanduser(filepath_or_buffer)
    return filepath_or_buffer


def _is_file_like(obj: Any) -> bool:
    if not (hasattr(obj, "read") or hasattr(obj, "write")):
        return False

    if not hasattr(obj, "__iter__"):
        return False

    return True
