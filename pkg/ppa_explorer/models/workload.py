from enum import Enum
from typing import List

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

SPATIAL_FIELDS = ('in_height', 'in_width', 'filter_height', 'filter_width')


class LayerKind(str, Enum):
    """Compute layer kind."""
    CONV = 'CONV'
    FC = 'FC'


class LayerConfig(BaseModel):
    """One conv or fully connected layer.

    FC layers are 1x1 convolutions on a 1x1 spatial grid.
    """
    model_config = ConfigDict(extra='forbid', frozen=True)

    name: str
    kind: LayerKind = LayerKind.CONV
    batch: int = 1
    in_channels: int
    out_channels: int
    in_height: int
    in_width: int
    filter_height: int
    filter_width: int
    stride: int = 1
    padding: int = 0

    @model_validator(mode='before')
    @classmethod
    def fill_spatial_dims(cls, data):
        """FC layers default to a 1x1 grid; conv layers must state theirs."""
        if not isinstance(data, dict):
            return data
        kind = data.get('kind', LayerKind.CONV)
        kind = kind.upper() if isinstance(kind, str) else kind
        if kind == LayerKind.FC.value:
            return {**{field: 1 for field in SPATIAL_FIELDS}, **data}
        if kind == LayerKind.CONV.value:
            missing = [field for field in SPATIAL_FIELDS if field not in data]
            if missing:
                raise ValueError(f"layer '{data.get('name', '?')}': CONV layer needs {', '.join(missing)}")
        return data

    @field_validator('kind', mode='before')
    @classmethod
    def normalize_kind(cls, v):
        """Accept lower-case kind tokens."""
        return v.upper() if isinstance(v, str) else v

    @model_validator(mode='after')
    def check_shape(self):
        """Enforce counts, FC degeneracy and positive output dims."""
        for field in ('batch', 'in_channels', 'out_channels', 'in_height', 'in_width',
                      'filter_height', 'filter_width', 'stride'):
            if getattr(self, field) < 1:
                raise ValueError(f"layer '{self.name}': {field} must be >= 1")
        if self.padding < 0:
            raise ValueError(f"layer '{self.name}': padding must be >= 0")
        if self.kind == LayerKind.FC:
            if self.filter_height != 1 or self.filter_width != 1:
                raise ValueError(f"layer '{self.name}': FC layer must have R=S=1")
            if self.in_height != 1 or self.in_width != 1:
                raise ValueError(f"layer '{self.name}': FC layer must have H=W=1")
            if self.stride != 1 or self.padding != 0:
                raise ValueError(f"layer '{self.name}': FC layer must have stride=1, padding=0")
        if self.out_height < 1:
            raise ValueError(f"layer '{self.name}': output height E < 1 (filter_height too large)")
        if self.out_width < 1:
            raise ValueError(f"layer '{self.name}': output width F < 1 (filter_width too large)")
        return self

    @property
    def out_height(self) -> int:
        """E = floor((H + 2p - R) / stride) + 1."""
        return (self.in_height + 2 * self.padding - self.filter_height) // self.stride + 1

    @property
    def out_width(self) -> int:
        """F = floor((W + 2p - S) / stride) + 1."""
        return (self.in_width + 2 * self.padding - self.filter_width) // self.stride + 1

    @property
    def padded_width(self) -> int:
        return self.in_width + 2 * self.padding

    def shape_key(self) -> tuple:
        """Everything but the name; layers with equal keys cost the same."""
        return (self.kind, self.batch, self.in_channels, self.out_channels,
                self.in_height, self.in_width, self.filter_height, self.filter_width,
                self.stride, self.padding)


class Network(BaseModel):
    """Ordered list of compute layers."""
    model_config = ConfigDict(extra='forbid', frozen=True)

    name: str
    layers: List[LayerConfig]

    @model_validator(mode='after')
    def check_layers(self):
        """Non-empty, unique layer names."""
        if not self.layers:
            raise ValueError(f"network '{self.name}' has no layers")
        seen = set()
        for layer in self.layers:
            if layer.name in seen:
                raise ValueError(f"network '{self.name}': duplicate layer name '{layer.name}'")
            seen.add(layer.name)
        return self
