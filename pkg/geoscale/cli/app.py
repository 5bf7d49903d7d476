import click

from geoscale.cli.commands import classify, fractal, maup, streets, terrain


def register_commands(group: click.Group) -> click.Group:
    """Attach every command family to the top-level group"""
    # Fractal measurement
    group.add_command(fractal.koch)
    group.add_command(fractal.length)
    group.add_command(fractal.dimension)
    group.add_command(fractal.area)

    # Head/tail classification
    group.add_command(classify.htb)
    group.add_command(classify.htindex)

    # Terrain
    group.add_command(terrain.slope)

    # Areal aggregation
    group.add_command(maup.maup)

    # Street topology
    group.add_command(streets.streets)
    group.add_command(streets.blocks)
    group.add_command(streets.cities)
    return group
