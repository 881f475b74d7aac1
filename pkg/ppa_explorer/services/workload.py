"""DNN workload parsing and built-in network presets."""
import hashlib
import json
import logging
import os
from typing import Dict, List, Optional

from pydantic import ValidationError

from ppa_explorer.models.workload import LayerConfig, LayerKind, Network
from ppa_explorer.services.errors import WorkloadError

logger = logging.getLogger(__name__)

CIFAR_CLASSES = 10
IMAGENET_CLASSES = 1000

VGG16_CHANNELS = [64, 64, 'M', 128, 128, 'M', 256, 256, 256, 'M', 512, 512, 512, 'M', 512, 512, 512, 'M']


def parse_network(text: str) -> Network:
    """Parse a JSON network document (strict: unknown keys are errors)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise WorkloadError(f'malformed network document: {e}') from e
    try:
        return Network.model_validate(data)
    except ValidationError as e:
        raise WorkloadError(_describe_network_error(e, data)) from e


def _describe_network_error(exc: ValidationError, data) -> str:
    """Name the layer and field of each validation failure."""
    layers = data.get('layers') if isinstance(data, dict) else None
    parts = []
    for err in exc.errors():
        loc = list(err.get('loc', ()))
        msg = err.get('msg', '')
        if len(loc) >= 2 and loc[0] == 'layers' and isinstance(loc[1], int) and isinstance(layers, list):
            index = loc[1]
            raw = layers[index] if index < len(layers) else None
            name = raw.get('name', f'#{index}') if isinstance(raw, dict) else f'#{index}'
            field = '.'.join(str(p) for p in loc[2:])
            if field:
                parts.append(f"layer '{name}': {field}: {msg}")
            else:
                parts.append(msg if f"'{name}'" in msg else f"layer '{name}': {msg}")
        else:
            field = '.'.join(str(p) for p in loc)
            parts.append(f'{field}: {msg}' if field else msg)
    return 'invalid network: ' + '; '.join(parts)


def load_network(source: str, num_classes: Optional[int] = None) -> Network:
    """Resolve a preset name, otherwise read a network file."""
    if source in PRESETS:
        return builtin_network(source, num_classes=num_classes)
    if not os.path.exists(source):
        raise WorkloadError(f"'{source}' is neither a preset ({', '.join(PRESETS)}) nor a file")
    with open(source, 'r', encoding='utf-8') as f:
        return parse_network(f.read())


def network_digest(net: Network) -> str:
    """sha256 of the canonical JSON form."""
    return hashlib.sha256(net.model_dump_json().encode('utf-8')).hexdigest()


def layer_macs(layer: LayerConfig) -> int:
    """N*M*C*E*F*R*S."""
    return (layer.batch * layer.out_channels * layer.in_channels * layer.out_height
            * layer.out_width * layer.filter_height * layer.filter_width)


def network_macs(net: Network) -> int:
    return sum(layer_macs(layer) for layer in net.layers)


# Preset builders

def _conv(name: str, c: int, m: int, hw: int, k: int, stride: int = 1,
          padding: Optional[int] = None) -> LayerConfig:
    return LayerConfig(
        name=name, kind=LayerKind.CONV, in_channels=c, out_channels=m,
        in_height=hw, in_width=hw, filter_height=k, filter_width=k,
        stride=stride, padding=k // 2 if padding is None else padding,
    )


def _fc(name: str, c: int, m: int) -> LayerConfig:
    return LayerConfig(name=name, kind=LayerKind.FC, in_channels=c, out_channels=m)


def _vgg16(hw: int, classes: int, head: List[int], name: str) -> Network:
    layers = []
    c = 3
    block, index = 1, 1
    for item in VGG16_CHANNELS:
        if item == 'M':
            hw //= 2
            block, index = block + 1, 1
            continue
        layers.append(_conv(f'conv{block}_{index}', c, item, hw, 3))
        c = item
        index += 1
    features = c * hw * hw
    for i, width in enumerate(head + [classes], start=1):
        layers.append(_fc(f'fc{i}', features, width))
        features = width
    return Network(name=name, layers=layers)


def _cifar_resnet(depth: int, classes: int) -> Network:
    """He et al. CIFAR ResNet with parameter-free shortcuts."""
    n = (depth - 2) // 6
    layers = [_conv('conv1', 3, 16, 32, 3)]
    c, hw = 16, 32
    for stage, width in enumerate((16, 32, 64), start=1):
        for block in range(1, n + 1):
            stride = 2 if stage > 1 and block == 1 else 1
            layers.append(_conv(f'layer{stage}.{block}.conv1', c, width, hw, 3, stride))
            hw = (hw + 2 - 3) // stride + 1
            layers.append(_conv(f'layer{stage}.{block}.conv2', width, width, hw, 3))
            c = width
    layers.append(_fc('fc', c, classes))
    return Network(name=f'resnet{depth}', layers=layers)


def _imagenet_stem() -> List[LayerConfig]:
    return [_conv('conv1', 3, 64, 224, 7, stride=2, padding=3)]


def _resnet34(classes: int) -> Network:
    layers = _imagenet_stem()
    c, hw = 64, 56  # after the stride-2 max-pool
    for stage, (width, blocks) in enumerate(((64, 3), (128, 4), (256, 6), (512, 3)), start=1):
        for block in range(1, blocks + 1):
            stride = 2 if stage > 1 and block == 1 else 1
            prefix = f'layer{stage}.{block}'
            layers.append(_conv(f'{prefix}.conv1', c, width, hw, 3, stride))
            out_hw = (hw + 2 - 3) // stride + 1
            layers.append(_conv(f'{prefix}.conv2', width, width, out_hw, 3))
            if stride != 1 or c != width:
                layers.append(_conv(f'{prefix}.downsample', c, width, hw, 1, stride, padding=0))
            c, hw = width, out_hw
    layers.append(_fc('fc', c, classes))
    return Network(name='resnet34', layers=layers)


def _resnet50(classes: int) -> Network:
    layers = _imagenet_stem()
    c, hw = 64, 56
    for stage, (width, blocks) in enumerate(((64, 3), (128, 4), (256, 6), (512, 3)), start=1):
        out_c = width * 4
        for block in range(1, blocks + 1):
            stride = 2 if stage > 1 and block == 1 else 1
            prefix = f'layer{stage}.{block}'
            layers.append(_conv(f'{prefix}.conv1', c, width, hw, 1, padding=0))
            layers.append(_conv(f'{prefix}.conv2', width, width, hw, 3, stride))
            out_hw = (hw + 2 - 3) // stride + 1
            layers.append(_conv(f'{prefix}.conv3', width, out_c, out_hw, 1, padding=0))
            if stride != 1 or c != out_c:
                layers.append(_conv(f'{prefix}.downsample', c, out_c, hw, 1, stride, padding=0))
            c, hw = out_c, out_hw
    layers.append(_fc('fc', c, classes))
    return Network(name='resnet50', layers=layers)


def _toy(classes: int) -> Network:
    return Network(name='toy', layers=[
        LayerConfig(name='conv', in_channels=1, out_channels=1, in_height=5, in_width=5,
                    filter_height=3, filter_width=3),
    ])


def _tiny_cnn(classes: int) -> Network:
    return Network(name='tiny-cnn', layers=[
        _conv('conv1', 2, 3, 6, 3),
        _conv('conv2', 3, 2, 6, 3, stride=2),
        _fc('fc', 2 * 3 * 3, classes),
    ])


# preset name -> (builder, default classes)
PRESETS: Dict[str, tuple] = {
    'vgg16-cifar': (lambda k: _vgg16(32, k, [512, 512], 'vgg16-cifar'), CIFAR_CLASSES),
    'resnet20': (lambda k: _cifar_resnet(20, k), CIFAR_CLASSES),
    'resnet56': (lambda k: _cifar_resnet(56, k), CIFAR_CLASSES),
    'vgg16-imagenet': (lambda k: _vgg16(224, k, [4096, 4096], 'vgg16-imagenet'), IMAGENET_CLASSES),
    'resnet34': (_resnet34, IMAGENET_CLASSES),
    'resnet50': (_resnet50, IMAGENET_CLASSES),
    'toy': (_toy, CIFAR_CLASSES),
    'tiny-cnn': (_tiny_cnn, CIFAR_CLASSES),
}

STUDY_PRESETS = ('vgg16-cifar', 'resnet20', 'resnet56', 'vgg16-imagenet', 'resnet34', 'resnet50')

_preset_cache: Dict[tuple, Network] = {}


def builtin_network(preset: str, num_classes: Optional[int] = None) -> Network:
    """Layer list of a published architecture (CIFAR 32x32, ImageNet 224x224)."""
    if preset not in PRESETS:
        raise WorkloadError(f"unknown preset '{preset}' (known: {', '.join(PRESETS)})")
    builder, default_classes = PRESETS[preset]
    classes = num_classes or default_classes
    key = (preset, classes)
    if key not in _preset_cache:
        _preset_cache[key] = builder(classes)
        logger.debug('built preset %s (%d classes, %d layers)', preset, classes, len(_preset_cache[key].layers))
    return _preset_cache[key]
