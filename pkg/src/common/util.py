# bool("False") is True, so environment flags go through this instead
def str_to_bool(s: str) -> bool:
    s_lower = s.strip().lower()
    if s_lower in ("true", "t", "yes", "y", "on", "1"):
        return True
    elif s_lower in ("false", "f", "no", "n", "off", "0", ""):
        return False
    else:
        raise ValueError(f"Cannot convert '{s}' to a bool")


def optional_int(s: str | None) -> int | None:
    if s is None or s.strip() == "":
        return None
    return int(s)
