"""Subset of robots.txt: Disallow prefixes per user agent."""


def parse_robots(robots_text):
    disallowed_prefixes = []
    applies_to_us = False
    for raw_line in robots_text.splitlines():
        stripped_line = raw_line.split("#")[0].strip()
        if not stripped_line:
            continue
        field_name, _, field_value = stripped_line.partition(":")
        field_name = field_name.strip().lower()
        field_value = field_value.strip()
        if field_name == "user-agent":
            applies_to_us = field_value == "*"
        elif field_name == "disallow" and applies_to_us and field_value:
            disallowed_prefixes.append(field_value)
    return disallowed_prefixes


def path_allowed(url_path, disallowed_prefixes):
    return not any(url_path.startswith(prefix) for prefix in disallowed_prefixes)
