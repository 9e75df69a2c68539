from django.core.management.base import CommandError

from BibundleApp import documents
from BibundleApp.action import validate_action
from BibundleApp.bibundle import validate_bibundle
from BibundleApp.functor import validate_functor
from BibundleApp.groupoid import validate_groupoid
from BibundleApp.management.base import INVALID, DocumentCommand
from BibundleApp.morita import validate_internal_groupoid

VALIDATORS = {
    documents.GROUPOID: validate_groupoid,
    documents.ACTION: validate_action,
    documents.FUNCTOR: validate_functor,
    documents.BIBUNDLE: validate_bibundle,
    documents.INTERNAL_GROUPOID: validate_internal_groupoid,
}


class Command(DocumentCommand):
    help = 'Check a document against every axiom of its kind and list the violations'

    def add_arguments(self, parser):
        parser.add_argument('document', help='Document file or db:<name>')
        self.add_format_argument(parser)

    def run(self, **options):
        document = self.read(options['document'], check=False)
        report = VALIDATORS[document.kind](document.payload)
        violations = [
            {'axiom': v.axiom, 'detail': v.detail, 'witness': list(v.witness)}
            for v in report
        ]
        data = {
            'kind': document.kind,
            'name': document.name,
            'valid': report.is_valid,
            'violations': violations,
        }
        if report.is_valid:
            lines = [self.style.SUCCESS(f'{document.kind} "{document.name}" is valid')]
        else:
            lines = [self.style.ERROR(f'{document.kind} "{document.name}" violates {len(report)} condition(s):')]
            lines += [f'  {v}' for v in report]
        self.report(data, lines, options)
        if not report.is_valid:
            raise CommandError(f'{options["document"]} is not a valid {document.kind}', returncode=INVALID)
