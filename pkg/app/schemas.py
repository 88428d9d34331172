from pydantic import BaseModel, Field, model_validator
from typing import Dict, List, Optional, Tuple, Union


class GroupDocument(BaseModel):
    name: Optional[str] = None
    order: int = Field(gt=0)
    cayley: List[List[int]]

    @model_validator(mode="after")
    def check_order(self) -> "GroupDocument":
        if len(self.cayley) != self.order or any(len(row) != self.order for row in self.cayley):
            raise ValueError(f"cayley table is not {self.order} x {self.order}")
        return self


GroupRef = Union[str, GroupDocument]


class ExtensionDocument(BaseModel):
    sub: GroupRef
    total: GroupRef
    quot: GroupRef
    incl: List[int]
    proj: List[int]


class TwoCocycleDocument(BaseModel):
    group: GroupRef
    coeff: GroupRef
    action: List[List[int]]
    table: List[List[int]]


class FactorSystemDocument(BaseModel):
    group: GroupRef
    kernel: GroupRef
    lift: List[List[int]]
    twist: List[List[int]]


class TorsorReport(BaseModel):
    members: int
    zgroup_order: int
    pairs_checked: int
    action_table: List[List[int]]
    well_defined: bool
    free: bool
    transitive: bool
    round_trips_checked: int = 0
    witnesses_checked: int = 0
    counterexample: Optional[dict] = None


class SplitLocusReport(BaseModel):
    split_members: List[int]
    delta_image: List[int]
    delta_image_independent: bool
    quotient_split: bool
    nonempty_iff_quotient_split: bool
    exact_at_h1: Optional[bool] = None
    exact_at_ext: Optional[bool] = None
    counterexample: Optional[dict] = None


class OuterClassReport(BaseModel):
    kappa: List[List[int]]
    members: List[str]
    zgroup_order: int
    torsor_verified: bool
    split_members: List[str] = []
    delta_image: List[str] = []
    witness_counts: List[int] = []


class ClassificationReport(BaseModel):
    pair: Tuple[str, str]
    bound: int
    extension_count: int
    outer_classes: List[OuterClassReport]
    timing: Optional[Dict[str, float]] = Field(default=None)


class EnumeratedExtension(BaseModel):
    label: str
    split: bool
    kappa: List[List[int]]


class EnumerationReport(BaseModel):
    pair: Tuple[str, str]
    bound: int
    extensions: List[EnumeratedExtension]


class TorsorCheckReport(BaseModel):
    pair: Tuple[str, str]
    classes: List[TorsorReport]


class AutomorphismReport(BaseModel):
    count: int
    crossed_count: int
    maps: List[List[int]]


class SplitReport(BaseModel):
    split: bool
    section: Optional[List[int]] = None
