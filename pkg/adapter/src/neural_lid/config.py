from dataclasses import dataclass

PROTOCOL_VERSION = "1"
HANDSHAKE = f"LIDPROTO {PROTOCOL_VERSION}"
LABELS = ["ID", "EN"]


@dataclass
class AdapterConfig:
    checkpoint: str
    max_seq_len: int = 128
    device: str = "cpu"
    protocol_version: str = PROTOCOL_VERSION

    def __post_init__(self):
        if self.protocol_version != PROTOCOL_VERSION:
            raise ValueError(
                f"protocol version {self.protocol_version!r} unsupported "
                f"(this adapter speaks {PROTOCOL_VERSION})"
            )
        if self.max_seq_len < 8:
            raise ValueError("max_seq_len must be at least 8")
