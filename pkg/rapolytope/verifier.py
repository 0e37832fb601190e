import logging
import time
from datetime import datetime
from logging import getLogger
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional

from rapolytope import __version__ as version
from rapolytope._models import CheckRecord, RunReport
from rapolytope._typing import FilePathOrBuffer, JsonDict
from rapolytope._utils import (
    digest_bytes,
    dump_json,
    load_json,
    resolve_thread_count,
    write_output,
)
from rapolytope.constants import AuditStrategy, DisjointMode, Family, VertexKind
from rapolytope.cube_diagram import cube_symmetries, verify_position_predictions
from rapolytope.exact_lorentz import LorentzVector
from rapolytope.face_enumeration import (
    VertexRay,
    VolumeCertificate,
    enumerate_vertices,
    f_vector,
    finite_volume_certificate,
    ridge_count,
    vertex_report,
)
from rapolytope.fuchsian_ends import (
    DeterminationAuditor,
    FacetSelection,
    census,
    is_maximal,
    selection_conflicts,
)
from rapolytope.halfspace_models import check_isometry, verify_standard_configuration
from rapolytope.polytope_core import (
    PolytopeSpec,
    build_polytope_P,
    dump_polytope,
    gram_value_set,
    is_right_angled,
)
from rapolytope.symmetry import (
    SymmetryGroup,
    automorphisms,
    realize_matrix,
    symmetry_report,
    verify_family_preservation,
)

logger = getLogger("rapolytope")

GOLDEN_VALUES_PATH = Path(__file__).parent / "golden_values.json"
INFINITY_RAY = LorentzVector([0, 0, 0, 0, 1, 1])


def load_golden_values(path: Optional[FilePathOrBuffer] = None) -> JsonDict:
    """
    Reads a golden value file, the one shipped with the package by default.
    """
    target = GOLDEN_VALUES_PATH if path is None else path
    if isinstance(target, (str, Path)):
        with open(target, "rb") as file:
            data: JsonDict = load_json(file.read())
        return data
    content: Any = target.read()  # type: ignore
    return load_json(content.encode() if isinstance(content, str) else content)  # type: ignore


class PolytopeVerifier:
    """
    Runs the named checks on a polytope (the built-in one by default) and collects RunReports.
    Expensive intermediate results (vertices, symmetry group) are computed once per verifier.
    """

    def __init__(
        self,
        polytope: Optional[PolytopeSpec] = None,
        threads: Optional[int] = None,
        golden: Optional[JsonDict] = None,
        debug_mode: bool = False,
        verbose: bool = False,
    ):
        self.polytope = polytope if polytope is not None else build_polytope_P()
        self.is_builtin = polytope is None
        self.threads = resolve_thread_count(threads)
        self.golden = golden if golden is not None else (load_golden_values() if self.is_builtin else {})
        self.debug_mode = debug_mode
        self.verbose = verbose
        self._vertices: Optional[List[VertexRay]] = None
        self._certificate: Optional[VolumeCertificate] = None
        self._group: Optional[SymmetryGroup] = None

        if self.verbose:
            logger.setLevel(level=logging.INFO)
            format = logging.Formatter("[%(levelname)s] %(asctime)s - %(message)s")
            handler = logging.StreamHandler()
            handler.setFormatter(fmt=format)
            logger.addHandler(handler)

        if self.debug_mode:
            logger.setLevel(level=logging.DEBUG)
            format = logging.Formatter("[%(levelname)s] %(asctime)s - %(message)s")
            handler = logging.StreamHandler()
            handler.setFormatter(fmt=format)
            logger.addHandler(handler)
            file_name = f"rapolytope_debug_{datetime.now().strftime('%Y_%m_%d_%H_%M_%S')}.txt"
            file_handler = logging.FileHandler(file_name)
            file_handler.setFormatter(fmt=format)
            logger.addHandler(file_handler)
            logger.debug(
                msg=f"Starting verifier debugging session. logging to stderr and {file_name}"
            )
            logger.debug(msg=f"Using rapolytope version {version}")
            logger.debug(
                msg=f"Current state of verifier: {len(self.polytope)} facets, d={self.polytope.d}, "
                f"threads={self.threads}, golden keys={sorted(self.golden)}"
            )

    @property
    def input_digest(self) -> str:
        return digest_bytes(dump_polytope(self.polytope))

    @property
    def vertices(self) -> List[VertexRay]:
        if self._vertices is None:
            self._vertices = enumerate_vertices(self.polytope, threads=self.threads)
        return self._vertices

    @property
    def certificate(self) -> VolumeCertificate:
        if self._certificate is None:
            self._certificate = finite_volume_certificate(self.polytope, self.vertices)
        return self._certificate

    @property
    def group(self) -> SymmetryGroup:
        if self._group is None:
            self._group = automorphisms(self.polytope, threads=self.threads)
        return self._group

    def _run(self, command: str, body: Callable[[RunReport], None]) -> RunReport:
        report = RunReport(command, self.input_digest)
        start = time.perf_counter()
        body(report)
        report.duration_seconds = time.perf_counter() - start
        logger.info("%s: %s in %.2fs", command, "pass" if report.passed else "FAIL", report.duration_seconds)
        return report

    def _golden_check(self, report: RunReport, key: str, actual: Any) -> None:
        if key not in self.golden:
            return
        expected = self.golden[key]
        report.add(
            CheckRecord(
                f"golden:{key}",
                expected == actual,
                f"expected {expected}, got {actual}",
                actual,
            )
        )

    def gram(self) -> RunReport:
        P = self.polytope

        def body(report: RunReport) -> None:
            values = sorted(gram_value_set(P), reverse=True)
            rendered = [str(v) for v in values]
            pairs = len(P) * (len(P) - 1) // 2
            report.add(CheckRecord("pairs", True, f"{pairs} unordered pairs", pairs))
            report.add(CheckRecord("gram_values", True, ", ".join(rendered), rendered))
            self._golden_check(report, "facet_count", len(P))
            self._golden_check(report, "pair_count", pairs)
            self._golden_check(report, "gram_values", rendered)

        return self._run("gram", body)

    def right_angled(self) -> RunReport:
        def body(report: RunReport) -> None:
            check = is_right_angled(self.polytope)
            detail = (
                f"all {check.pairs_checked} pairs checked"
                if check
                else f"{check.counterexample} meet with inner product {check.counterexample_inner}"
            )
            report.add(CheckRecord("right_angled", bool(check), detail, check.to_dict()))

        return self._run("check-right-angled", body)

    def positions(self) -> RunReport:
        def body(report: RunReport) -> None:
            result = verify_position_predictions(self.polytope, threads=self.threads)
            report.add(
                CheckRecord(
                    "cube_predictions",
                    result.passed,
                    f"{result.pairs} pairs, {len(result.mismatches)} mismatches",
                    result.to_dict(),
                )
            )
            self._golden_check(report, "pair_count", result.pairs)
            if self.is_builtin:
                count = len(cube_symmetries())
                report.add(CheckRecord("cube_symmetries", True, f"{count} symmetries of the cubes", count))
                self._golden_check(report, "cube_symmetries", count)

        return self._run("verify-positions", body)

    def ridges(self, facet: Optional[str] = None) -> RunReport:
        P = self.polytope

        def body(report: RunReport) -> None:
            if facet is not None:
                count = ridge_count(P, P.index_of(facet))
                report.add(CheckRecord(f"ridges:{facet}", True, str(count), count))
                return
            counts = {label: ridge_count(P, i) for i, label in enumerate(P.labels)}
            report.add(CheckRecord("ridge_counts", True, f"{len(counts)} facets", counts))
            by_class = {
                "I/II": sorted({counts[P.labels[i]] for i in P.indices_of_family(Family.TYPE_I, Family.TYPE_II)}),
                "III": sorted({counts[P.labels[i]] for i in P.indices_of_family(Family.TYPE_III)}),
            }
            if by_class["I/II"] and by_class["III"]:
                separated = not set(by_class["I/II"]) & set(by_class["III"])
                report.add(
                    CheckRecord("ridge_counts_separate_classes", separated, str(by_class), by_class)
                )
            golden = self.golden.get("ridge_counts")
            if golden:
                matches = all(by_class.get(k) == [v] for k, v in golden.items())
                report.add(
                    CheckRecord("golden:ridge_counts", matches, f"expected {golden}, got {by_class}", by_class)
                )

        return self._run("ridges", body)

    def vertex_check(self, with_listing: bool = False) -> RunReport:
        def body(report: RunReport) -> None:
            vertices = self.vertices
            ideal = sum(1 for v in vertices if v.kind is VertexKind.IDEAL)
            counts = {"finite": len(vertices) - ideal, "ideal": ideal}
            report.add(CheckRecord("vertex_counts", bool(vertices), str(counts), counts))
            self._golden_check(report, "vertex_counts", counts)
            if with_listing:
                records = vertex_report(self.polytope, vertices)
                report.add(CheckRecord("vertex_listing", True, f"{len(records)} rays", records.to_dicts()))

        return self._run("vertices", body)

    def finite_volume(self) -> RunReport:
        P = self.polytope

        def body(report: RunReport) -> None:
            certificate = self.certificate
            report.add(
                CheckRecord(
                    "finite_volume",
                    certificate.finite_volume,
                    f"combinatorial={certificate.method_combinatorial}, "
                    f"ray oracle={certificate.method_ray_oracle}",
                    certificate.to_dict(),
                )
            )
            if self.is_builtin:
                at_infinity = next((v for v in self.vertices if v.direction == INFINITY_RAY), None)
                expected = frozenset(P.indices_of_family(Family.TYPE_I))
                report.add(
                    CheckRecord(
                        "ideal_vertex_at_infinity",
                        at_infinity is not None and at_infinity.incident_facets == expected,
                        "ray (0,0,0,0,1,1) incident to the 8 type I facets",
                    )
                )
            if certificate.finite_volume:
                faces = list(f_vector(P, self.vertices, certificate))
                report.add(CheckRecord("f_vector", True, str(faces), faces))
                self._golden_check(report, "f_vector", faces)

        return self._run("finite-volume", body)

    def symmetries(self) -> RunReport:
        P = self.polytope

        def body(report: RunReport) -> None:
            G = self.group
            summary = symmetry_report(P, G)
            report.add(CheckRecord("order", True, str(summary.order), summary.to_dict()))
            report.add(
                CheckRecord(
                    "first_isomorphism",
                    summary.first_isomorphism_holds,
                    f"{summary.order} = {len(summary.kernel)} x {summary.image_order}",
                )
            )
            report.add(
                CheckRecord(
                    "reflections_generate",
                    summary.reflections_generate,
                    "the five reflections generate the whole group",
                )
            )
            assert G.elements is not None
            realized = 0
            for sigma in G.elements:
                realize_matrix(sigma, P)
                realized += 1
            report.add(CheckRecord("realized_matrices", realized == G.order, f"{realized} matrices preserve J"))
            self._golden_check(report, "symmetry_order", summary.order)
            self._golden_check(report, "phi_star_kernel", len(summary.kernel))
            self._golden_check(report, "phi_star_image", summary.image_order)

        return self._run("symmetries", body)

    def families(self) -> RunReport:
        def body(report: RunReport) -> None:
            result = verify_family_preservation(self.group, self.polytope)
            report.add(
                CheckRecord(
                    "class_preservation",
                    result.preserves_classes,
                    f"{result.elements_checked} elements",
                    result.to_dict(),
                )
            )
            report.add(
                CheckRecord(
                    "wholesale_swap",
                    result.swaps_wholesale,
                    "moving one type I facet into type II moves all of them",
                )
            )

        return self._run("verify-families", body)

    def ends(self, mode: DisjointMode = DisjointMode.STRICT, audit: bool = True) -> RunReport:
        P = self.polytope

        def body(report: RunReport) -> None:
            result = census(P, mode, self.group, threads=self.threads)
            valid = all(
                not selection_conflicts(P, s.removed, mode) and is_maximal(P, s)
                for s in result.selections
            )
            report.add(CheckRecord("census", valid, f"{result.count} maximal sets", result.to_dict()))
            counts = {"maximal_sets": result.count, "orbits": len(result.orbit_sizes())}
            golden = self.golden.get("census", {}).get(mode.value)
            if golden is not None:
                report.add(
                    CheckRecord(f"golden:census:{mode.value}", golden == counts, f"expected {golden}, got {counts}", counts)
                )
            if audit:
                auditor = DeterminationAuditor(P, AuditStrategy.GREEDY)
                undetermined = [
                    s
                    for s in result.selections
                    if not auditor.audit(s).all_determined
                ]
                report.add(
                    CheckRecord(
                        "determination_audit",
                        not undetermined,
                        f"{len(result.selections) - len(undetermined)} of {len(result.selections)} "
                        "selections pin every remaining facet",
                        [s.labels(P) for s in undetermined],
                    )
                )

        return self._run(f"ends:{mode.value}", body)

    def audit(
        self, removed: Iterable[str], strategy: AuditStrategy = AuditStrategy.GREEDY,
        mode: DisjointMode = DisjointMode.STRICT,
    ) -> RunReport:
        P = self.polytope

        def body(report: RunReport) -> None:
            selection = FacetSelection(frozenset(P.index_of(label) for label in removed), mode)
            result = DeterminationAuditor(P, strategy).audit(selection)
            if result.conflicts:
                report.add(
                    CheckRecord(
                        "removed_set_disjoint",
                        False,
                        f"not pairwise disjoint in {mode.value} mode: {result.conflicts}",
                    )
                )
            report.add(
                CheckRecord(
                    "all_determined",
                    result.all_determined,
                    f"tangency used for {len(result.tangency_targets)} facets",
                    result.to_dict(),
                )
            )

        return self._run("audit", body)

    def footprints(self) -> RunReport:
        def body(report: RunReport) -> None:
            result = verify_standard_configuration(self.polytope)
            report.add(
                CheckRecord(
                    "standard_configuration",
                    result.passed,
                    f"{result.planes} planes, {result.spheres} spheres, "
                    f"{len(result.mismatches)} mismatches",
                    result.to_dict(),
                )
            )
            isometry = check_isometry(d=self.polytope.d)
            report.add(
                CheckRecord(
                    "model_isometry",
                    isometry.passed,
                    f"max error {isometry.max_abs_error:.3e} over {isometry.pairs} pairs",
                    isometry.to_dict(),
                )
            )

        return self._run("footprints", body)

    def verify_all(self) -> RunReport:
        """
        Every check in sequence; the combined report passes when all of them pass.
        """
        parts = [self.gram(), self.right_angled()]
        if self.is_builtin:
            parts += [self.positions(), self.ridges()]
        if parts[1].passed:
            parts += [self.vertex_check(), self.finite_volume()]
        if self.is_builtin:
            parts += [self.symmetries(), self.families(), self.footprints(), self.ends(DisjointMode.STRICT)]
            parts.append(self.ends(DisjointMode.WEAK, audit=False))
        combined = RunReport("verify-all", self.input_digest)
        for part in parts:
            for check in part.checks:
                combined.add(
                    CheckRecord(f"{part.command}/{check.name}", check.passed, check.detail, check.value)
                )
            combined.duration_seconds += part.duration_seconds
        return combined

    def computed_golden_values(self) -> Dict[str, Any]:
        """
        Values that are only known by computation: vertex counts, f-vector and census sizes.
        """
        ideal = sum(1 for v in self.vertices if v.kind is VertexKind.IDEAL)
        values: Dict[str, Any] = {
            "vertex_counts": {"finite": len(self.vertices) - ideal, "ideal": ideal},
            "f_vector": list(f_vector(self.polytope, self.vertices, self.certificate)),
        }
        census_values = {}
        for mode in DisjointMode:
            result = census(self.polytope, mode, self.group, threads=self.threads)
            census_values[mode.value] = {
                "maximal_sets": result.count,
                "orbits": len(result.orbit_sizes()),
            }
        values["census"] = census_values
        return values

    def freeze_golden(self, destination: FilePathOrBuffer) -> Dict[str, Any]:
        values = dict(self.golden)
        values.update(self.computed_golden_values())
        write_output(dump_json(values), destination)
        return values
