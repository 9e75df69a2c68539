from django.db import models

from . import documents


class Document(models.Model):
    """A named structure stored as its JSON payload."""

    name = models.CharField(max_length=255, unique=True)
    kind = models.CharField(max_length=32, choices=documents.KIND_CHOICES)
    payload = models.JSONField()
    created_at = models.DateTimeField(auto_now_add=True)
    updated_at = models.DateTimeField(auto_now=True)

    def __str__(self):
        return f"{self.kind} {self.name}"

    def to_document(self, resolver=None, check=True):
        return documents.from_json(
            {'kind': self.kind, 'name': self.name, 'payload': self.payload}, resolver, check
        )

    @classmethod
    def from_document(cls, document):
        data = documents.to_json(document)
        return cls(name=data['name'], kind=data['kind'], payload=data['payload'])

    class Meta:
        ordering = ['name']
