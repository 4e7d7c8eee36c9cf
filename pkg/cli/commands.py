"""
Módulo que implementa la línea de comandos de la biblioteca de fusión.

Cada subcomando compone operaciones de los demás paquetes, escribe sus
artefactos en el directorio de salida e imprime una única línea clave=valor
como resumen. Códigos de salida: 0 éxito, 2 error de entrada o de formato,
3 fallo numérico.
"""

import argparse
import json
import logging
import os
import sys
from dataclasses import replace

from evaluation.metrics import depth_rmse, mask_metrics
from freespace.classifier import classify_image, collect_labelled_tiles, train_classifier
from freespace.ground import fuse_free_masks, ground_mask_from_depth
from freespace.ogmap import (blind_spot_mask, fuse_ogmaps_conservative, fuse_ogmaps_uncertainty,
                             image_ogmap, lidar_ogmap)
from fusion.gp_fusion import fuse_frame
from geometry.sensor_geometry import project_cloud
from io_formats.artifacts import (load_cloud, load_depth, load_grey, load_mask, load_variance,
                                  output_path, save_cloud, save_depth, save_grey, save_mask,
                                  save_variance, write_ogmap)
from io_formats.config import (gp_from_config, grid_from_config, read_config,
                               rig_from_config)
from io_formats.netpbm import PFM_MAGIC
from io_formats.scene_file import scene_from_document
from models.errors import DegenerateLabels, FusionError, ParseError
from models.maps import DenseDepthMap
from models.scene import LidarScanSpec
from simulation.synthetic_scene import (SHIPPED_SCENES, ground_truth_free_mask, render_camera,
                                        sample_lidar, shipped_scene)

logger = logging.getLogger(__name__)

OGMAP_MODES = ("lidar", "image", "conservative", "uncertainty")


def _document(path, section):
    return None if path is None else read_config(path, section)


def _rig(args):
    return rig_from_config(_document(args.rig, "rig"))


def _grid(args):
    return grid_from_config(_document(args.grid, "grid"),
                            height_tol=getattr(args, "height_tol", None),
                            unc_tol=getattr(args, "unc_tol", None))


def _scan_for_rig(scene, rig):
    """Ajusta el barrido simulado a la apertura y el alcance del LiDAR montado."""
    scan = LidarScanSpec(channels=scene.scan.channels,
                         vfov_halfangle=rig.lidar_vfov_halfangle,
                         azimuth_step=scene.scan.azimuth_step,
                         max_range=min(scene.scan.max_range, rig.lidar_max_range))
    return replace(scene, scan=scan)


def load_scene(value, rig):
    """
    Carga una escena por nombre de las incluidas o desde un archivo.

    Args:
        value (str): Ruta a un archivo de escena o nombre de una escena incluida.
        rig (RigExtrinsics): Montaje que fija la apertura del barrido.

    Returns:
        Scene: Escena lista para simular.
    """
    if value in SHIPPED_SCENES and not os.path.exists(value):
        scene = shipped_scene(value)
    else:
        scene = scene_from_document(read_config(value, "scene"), rig.lidar_vfov_halfangle)
    return _scan_for_rig(scene, rig)


def _require(args, name, mode):
    if getattr(args, name) is None:
        raise ParseError(f"el modo {mode} necesita --{name}", field=f"--{name}")


def _counts(mask_like):
    return (f"free={int(mask_like.free.sum())} occupied={int(mask_like.occupied.sum())} "
            f"unknown={int(mask_like.unknown.sum())}")


def cmd_simulate(args):
    """
    Simula una escena: imagen, profundidad y máscara de referencia, y barrido LiDAR.

    Escribe grey.pgm, gt_depth.pfm, gt_mask.pgm y cloud.txt en --out.
    """
    rig = _rig(args)
    _, freespace = _grid(args)
    scene = load_scene(args.scene, rig)
    grey, depth = render_camera(scene, rig)
    mask = ground_truth_free_mask(scene, rig, height_tol=freespace.height_tol)
    cloud = sample_lidar(scene, rig)
    save_grey(output_path(args.out, "grey.pgm"), grey)
    save_depth(output_path(args.out, "gt_depth.pfm"), depth)
    save_mask(output_path(args.out, "gt_mask.pgm"), mask)
    save_cloud(output_path(args.out, "cloud.txt"), cloud)
    print(f"simulate width={grey.width} height={grey.height} points={len(cloud)} "
          f"known={int(depth.known.sum())}")
    return 0


def cmd_project(args):
    """
    Proyecta la nube sobre la rejilla de la imagen y escribe sparse.pfm.

    Salvo con --keep-occluded se descartan los retornos ocultos a la cámara.
    """
    rig = _rig(args)
    cloud = load_cloud(args.cloud)
    grey = load_grey(args.grey)
    sparse = project_cloud(cloud, rig, grey, drop_occluded=not args.keep_occluded)
    save_depth(output_path(args.out, "sparse.pfm"), DenseDepthMap(sparse.depth))
    print(f"project points={len(cloud)} filled={int(sparse.filled.sum())}")
    return 0


def cmd_fuse(args):
    """
    Proyecta la nube e iguala la resolución con la imagen.

    Escribe depth.pfm, variance.pfm y known.pgm en --out.
    """
    rig = _rig(args)
    params = gp_from_config(_document(args.gp, "gp"))
    cloud = load_cloud(args.cloud)
    grey = load_grey(args.grey)
    sparse = project_cloud(cloud, rig, grey, drop_occluded=not args.keep_occluded)
    dense, uncertainty = fuse_frame(sparse, grey, params, threads=args.threads)
    save_depth(output_path(args.out, "depth.pfm"), dense,
               known_path=output_path(args.out, "known.pgm"))
    save_variance(output_path(args.out, "variance.pfm"), uncertainty)
    print(f"fuse filled={int(sparse.filled.sum())} known={int(dense.known.sum())} "
          f"total={dense.depth.size}")
    return 0


def cmd_fsd(args):
    """
    Detecta el espacio libre por profundidad y, si es posible, por imagen.

    El clasificador de imagen se entrena con bloques etiquetados por la
    máscara de profundidad. En la fusión la profundidad sólo decide donde su
    etiqueta resiste la incertidumbre de altura (máscara estricta). Escribe
    depth_mask.pgm, image_mask.pgm (si el clasificador se pudo entrenar) y
    mask.pgm con la fusión.
    """
    rig = _rig(args)
    _, freespace = _grid(args)
    dense = load_depth(args.depth, known_path=args.known)
    uncertainty = load_variance(args.variance)
    grey = load_grey(args.grey)
    tolerances = dict(height_tol=freespace.height_tol, unc_tol=freespace.unc_tol,
                      max_depth=freespace.max_depth)
    depth_mask = ground_mask_from_depth(dense, uncertainty, rig, **tolerances)
    save_mask(output_path(args.out, "depth_mask.pgm"), depth_mask)

    fused = depth_mask
    patches, free = collect_labelled_tiles(grey, depth_mask)
    try:
        classifier = train_classifier(patches, free)
    except DegenerateLabels as error:
        logger.warning("Se omite la máscara de imagen: %s", error)
    else:
        image_mask = classify_image(grey, classifier)
        save_mask(output_path(args.out, "image_mask.pgm"), image_mask)
        strict_mask = ground_mask_from_depth(dense, uncertainty, rig, strict=True, **tolerances)
        fused = fuse_free_masks(strict_mask, image_mask)
    save_mask(output_path(args.out, "mask.pgm"), fused)
    print(f"fsd {_counts(fused)} image_mask={'yes' if fused is not depth_mask else 'no'}")
    return 0


def cmd_ogmap(args):
    """
    Construye o fusiona mallas de ocupación según --mode.

    Escribe ogmap.pgm, ogmap_confidence.pfm y ogmap.hdr en --out.
    """
    rig = _rig(args)
    grid, freespace = _grid(args)
    lidar = image = None
    if args.mode in ("lidar", "conservative", "uncertainty"):
        _require(args, "cloud", args.mode)
        lidar = lidar_ogmap(load_cloud(args.cloud), rig, grid, height_tol=freespace.height_tol)
    if args.mode in ("image", "conservative", "uncertainty"):
        _require(args, "mask", args.mode)
        image = image_ogmap(load_mask(args.mask), rig, grid)

    if args.mode == "lidar":
        result = lidar
    elif args.mode == "image":
        result = image
    elif args.mode == "conservative":
        result = fuse_ogmaps_conservative(lidar, image)
    else:
        result = fuse_ogmaps_uncertainty(lidar, image, blind_spot_mask(rig, grid))
    write_ogmap(output_path(args.out, "ogmap"), result)
    print(f"ogmap mode={args.mode} {_counts(result)}")
    return 0


def _is_pfm(path):
    with open(path, "rb") as handle:
        return handle.read(2) == PFM_MAGIC


def cmd_eval(args):
    """
    Compara una predicción con la referencia.

    Dos máscaras PGM dan exactitud, precisión, tasa de verdaderos positivos y
    discrepancias; dos mapas PFM dan el RMSE de profundidad.
    """
    if _is_pfm(args.pred):
        rmse = depth_rmse(load_depth(args.pred), load_depth(args.gt))
        result = {"rmse": rmse}
        print(f"rmse={rmse:.6f}")
    else:
        metrics = mask_metrics(load_mask(args.pred), load_mask(args.gt))
        result = metrics.as_dict()
        line = (f"accuracy={metrics.accuracy:.6f} precision={metrics.precision:.6f} "
                f"tpr={metrics.true_positive_rate:.6f} mismatches={metrics.mismatch_count}")
        if metrics.undefined:
            line += f" undefined={','.join(metrics.undefined)}"
        print(line)
    if args.json is not None:
        with open(args.json, "w", encoding="utf-8", newline="") as handle:
            json.dump(result, handle, indent=2, sort_keys=True)
            handle.write("\n")
    return 0


def build_parser():
    """
    Construye el analizador de argumentos con todos los subcomandos.

    Returns:
        argparse.ArgumentParser: Analizador listo para usar.
    """
    parser = argparse.ArgumentParser(
        prog="lidar-fusion",
        description="Fusión de LiDAR y cámara equirectangular con procesos gaussianos.")
    parser.add_argument("-v", "--verbose", action="store_true", help="registro detallado")

    rig = argparse.ArgumentParser(add_help=False)
    rig.add_argument("--rig", help="configuración del montaje (sección rig)")
    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--grid", help="configuración de la malla (sección grid)")
    grid.add_argument("--height-tol", type=float, help="tolerancia de altura (m)")
    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("--out", required=True, help="directorio de salida")

    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser("simulate", parents=[rig, grid, out],
                                   help="simula una escena sintética")
    simulate.add_argument("--scene", required=True,
                          help=f"archivo de escena o nombre: {', '.join(SHIPPED_SCENES)}")
    simulate.set_defaults(handler=cmd_simulate)

    project = commands.add_parser("project", parents=[rig, out],
                                  help="proyecta la nube sobre la imagen")
    project.add_argument("--cloud", required=True)
    project.add_argument("--grey", required=True)
    project.add_argument("--keep-occluded", action="store_true",
                         help="conserva los retornos ocultos a la cámara")
    project.set_defaults(handler=cmd_project)

    fuse = commands.add_parser("fuse", parents=[rig, out],
                               help="iguala la resolución con procesos gaussianos")
    fuse.add_argument("--cloud", required=True)
    fuse.add_argument("--grey", required=True)
    fuse.add_argument("--keep-occluded", action="store_true",
                      help="conserva los retornos ocultos a la cámara")
    fuse.add_argument("--gp", help="configuración del proceso (sección gp)")
    fuse.add_argument("--threads", type=int, default=1, help="hilos para los parches")
    fuse.set_defaults(handler=cmd_fuse)

    fsd = commands.add_parser("fsd", parents=[rig, grid, out],
                              help="detecta el espacio libre")
    fsd.add_argument("--depth", required=True)
    fsd.add_argument("--variance", required=True)
    fsd.add_argument("--grey", required=True)
    fsd.add_argument("--known", help="máscara de píxeles conocidos (known.pgm)")
    fsd.add_argument("--unc-tol", type=float, help="varianza máxima para decidir (m²)")
    fsd.set_defaults(handler=cmd_fsd)

    ogmap = commands.add_parser("ogmap", parents=[rig, grid, out],
                                help="construye o fusiona mallas de ocupación")
    ogmap.add_argument("--mode", choices=OGMAP_MODES, required=True)
    ogmap.add_argument("--cloud", help="nube de puntos (modos lidar, conservative, uncertainty)")
    ogmap.add_argument("--mask", help="máscara de imagen (modos image, conservative, uncertainty)")
    ogmap.set_defaults(handler=cmd_ogmap)

    evaluate = commands.add_parser("eval", help="compara una predicción con la referencia")
    evaluate.add_argument("--pred", required=True)
    evaluate.add_argument("--gt", required=True)
    evaluate.add_argument("--json", help="archivo JSON con las métricas")
    evaluate.set_defaults(handler=cmd_eval)
    return parser


def main(argv=None):
    """
    Ejecuta la línea de comandos.

    Args:
        argv (list): Argumentos sin el nombre del programa; por defecto sys.argv.

    Returns:
        int: Código de salida.
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.handler(args)
    except FusionError as error:
        print(f"error: {error}", file=sys.stderr)
        return error.exit_code
    except OSError as error:
        print(f"error: no se puede acceder a {error.filename}: {error.strerror}", file=sys.stderr)
        return 2
