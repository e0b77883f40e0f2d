// Typed client for the screening service. The UI never computes a
// prediction itself; everything displayed comes from these responses.

export type Locale = "en" | "hi";

export interface CatalogOption {
  value: string;
  encoding: number;
  label: string;
}

export interface CatalogItem {
  code: string;
  kind: "choice" | "number";
  text: string;
  options: CatalogOption[];
}

export interface Catalog {
  version: string;
  locale: Locale;
  items: CatalogItem[];
}

export type AnswerValue = string | number;

export interface ScreeningResult {
  label: string;
  probability: number;
  probabilities: Record<string, number>;
  model_family: string;
  model_version: string;
  catalog_version: string;
  disclaimer: string;
}

export interface FieldIssue {
  code: string;
  problem: string;
}

export class ValidationFailure extends Error {
  issues: FieldIssue[];
  constructor(issues: FieldIssue[]) {
    super("validation failed");
    this.issues = issues;
  }
}

export class ServiceUnavailable extends Error {}

export class ApiClient {
  constructor(private baseUrl: string = "") {}

  async fetchCatalog(locale: Locale): Promise<Catalog> {
    const response = await fetch(`${this.baseUrl}/catalog?locale=${locale}`);
    if (response.status === 503) throw new ServiceUnavailable();
    if (!response.ok) throw new Error(`catalog request failed: ${response.status}`);
    return (await response.json()) as Catalog;
  }

  async screen(
    answers: Record<string, AnswerValue>,
    catalogVersion: string,
    locale: Locale,
  ): Promise<ScreeningResult> {
    const response = await fetch(`${this.baseUrl}/screen`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ answers, catalog_version: catalogVersion, locale }),
    });
    if (response.status === 503) throw new ServiceUnavailable();
    if (response.status === 422) {
      const body = await response.json();
      const issues: FieldIssue[] = body?.detail?.issues ?? [];
      throw new ValidationFailure(issues);
    }
    if (!response.ok) throw new Error(`screen request failed: ${response.status}`);
    return (await response.json()) as ScreeningResult;
  }

  async health(): Promise<boolean> {
    try {
      const response = await fetch(`${this.baseUrl}/health`);
      return response.ok;
    } catch {
      return false;
    }
  }
}
