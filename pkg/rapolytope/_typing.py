from fractions import Fraction
from pathlib import Path
from typing import IO, Any, Dict, FrozenSet, List, Sequence, Tuple, Union

try:
    import pandas as pd  # type: ignore

    DataFrameType = pd.core.frame.DataFrame
except ImportError:
    pd = None
    DataFrameType = Any

FilePathOrBuffer = Union[str, Path, IO[str], IO[bytes], None]
RationalLike = Union[int, Fraction, str]
FacetIndexSet = FrozenSet[int]
IndexPair = Tuple[int, int]
JsonDict = Dict[str, Any]
FloatVector = Sequence[float]
Partition = List[List[int]]
