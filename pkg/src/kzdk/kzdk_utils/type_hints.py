import numpy as np
import pandas as pd

from numbers import Number
from os import PathLike as _PathLike
from typing import (
    Literal,
    Sequence,
    TypeAlias,
    Union
)


# Custom Type-Hints
PathLike: TypeAlias = Union[str, _PathLike]

ComplexLike: TypeAlias = Union[Number, complex, float, int]
ArrayLike: TypeAlias = Union[np.ndarray, Sequence]
ParityVector: TypeAlias = np.ndarray
ParityList: TypeAlias = Sequence[ArrayLike]

DataFrame = pd.DataFrame
DataFrameLike: TypeAlias = Union[DataFrame, pd.Series]

# Module families & generators
ModuleKind: TypeAlias = Literal["T", "A", "P"]
GeneratorName: TypeAlias = Literal["E", "N", "psi+", "psi-"]

# Checks
AxiomName: TypeAlias = Literal[
    "pentagon",
    "hexagonPlus",
    "hexagonMinus",
    "betaBraid",
    "equivariance",
    "unitality",
    "quasitriangularity",
    "coassociativity",
    "intertwining",
    "hopf",
]
BraidSign: TypeAlias = Literal[1, -1]
PexpScheme: TypeAlias = Literal["midpoint", "magnus4"]
AntipodeVariant: TypeAlias = Literal["derived", "printed"]
ClosedFormKind: TypeAlias = Literal["sol1", "sol2", "sol31", "TTP1", "PPP0", "PPP1"]

StringTuple: TypeAlias = tuple[str, ...]
