from logging import getLogger
from typing import Any, ClassVar, List, Type

from rapolytope._models import (
    CheckRecord,
    DeterminationRecord,
    FootprintRecord,
    PairCheckRecord,
    RAPolytopeModel,
    SelectionRecord,
    VertexRecord,
)
from rapolytope._typing import DataFrameType

logger = getLogger("rapolytope")

try:
    import pandas as pd  # type: ignore
except ImportError:
    pd = None
    logger.warning(
        "Pandas export is unavailable. Install pandas to unlock dataframe functions."
    )


def _join_lists(row: Any) -> Any:
    if isinstance(row, list):
        return " ".join(str(item) for item in row)
    return row


class _RecordList(List[Any]):
    record_type: ClassVar[Type[RAPolytopeModel]] = RAPolytopeModel

    def to_dicts(self) -> List[Any]:
        return [record.to_dict() for record in self]

    def to_dataframe(self, join_lists: bool = False) -> DataFrameType:
        """
        Transforms the records into a dataframe with one column per record field

        :param join_lists: Render list-valued fields as space separated strings
        :type join_lists: bool
        :return: Records as a dataframe
        """
        if pd is None:
            raise ImportError("pandas is required for to_dataframe()")
        df = pd.DataFrame(self.to_dicts(), columns=self.record_type.get_dataframe_cols())
        if join_lists:
            for column in df.columns:
                df[column] = df[column].apply(_join_lists)
        return df.convert_dtypes()


class VertexList(_RecordList):
    record_type = VertexRecord


class PairCheckList(_RecordList):
    record_type = PairCheckRecord

    def disagreements(self) -> "PairCheckList":
        return PairCheckList(record for record in self if not record.agrees)


class SelectionList(_RecordList):
    record_type = SelectionRecord

    def sizes(self) -> List[int]:
        return sorted({record.size for record in self})


class DeterminationList(_RecordList):
    record_type = DeterminationRecord


class FootprintList(_RecordList):
    record_type = FootprintRecord


