import click
import tomli


# pylint: disable-next=unused-argument
def validate_overrides(ctx, param, value):  # type: ignore
    """Parses repeated `key=value` options; values are TOML literals, bare words stay strings."""
    overrides = []
    for item in value or ():
        key, sep, raw = item.partition('=')
        key = key.strip()
        if not sep or not key:
            raise click.BadParameter(f'Expected key=value, got "{item}"')
        overrides.append((key, parse_value(raw.strip())))
    return overrides


def parse_value(raw: str):  # type: ignore
    try:
        return tomli.loads(f'value = {raw}')['value']
    except tomli.TOMLDecodeError:
        return raw
